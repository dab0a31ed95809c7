#include "ppfs/eigen_fs.hpp"

#include <algorithm>
#include <cmath>

#include "ppfs/errors.hpp"
#include "ppfs/kernels.hpp"
#include "ppfs/protocols.hpp"
#include "ppfs/smc.hpp"
#include "ppfs/tlv.hpp"

namespace ppfs::eig {

using kernels::dot_mod64;
using kernels::sum_mod64;

namespace {

constexpr double kScale = double(1ull << kScaleBits);

std::int64_t to_signed(std::uint64_t u) { return static_cast<std::int64_t>(u); }

std::vector<std::uint8_t> moment_payload(std::uint64_t code, std::uint64_t a,
                                         std::uint64_t b, std::uint64_t c) {
  TlvWriter w;
  w.put_u64(code);
  w.put_u64(a);
  w.put_u64(b);
  w.put_u64(c);
  return w.take();
}

}  // namespace

ScaledColumns quantize(const NumericTable& t) {
  ScaledColumns out;
  out.n_rows = t.n_rows;
  out.cols.resize(t.columns.size());
  unsigned long long maxabs = 0;
  for (std::size_t j = 0; j < t.columns.size(); ++j) {
    out.cols[j].reserve(t.n_rows);
    for (double v : t.columns[j]) {
      // 8e12 * 2^20 still fits signed 64 bits, so llround stays defined.
      if (!std::isfinite(v) || std::fabs(v) >= 8.0e12)
        throw ConfigError("column " + t.feature_names[j] +
                          " holds a value outside the fixed-point range");
      long long s = std::llround(v * kScale);
      unsigned long long mag = s < 0 ? 0ull - static_cast<unsigned long long>(s)
                                     : static_cast<unsigned long long>(s);
      maxabs = std::max(maxabs, mag);
      out.cols[j].push_back(static_cast<std::uint64_t>(s));
    }
  }
  // Worst sum of products must stay under 2^62 so no total ever wraps.
  if (static_cast<unsigned __int128>(t.n_rows) * maxabs * maxabs >=
      (static_cast<unsigned __int128>(1) << 62))
    throw ConfigError(
        "data magnitude exceeds the fixed-point budget; rescale the input");
  return out;
}

MomentAggregates assemble_moments(
    std::uint64_t n, const std::vector<std::uint64_t>& fs_scaled,
    const std::vector<std::vector<std::uint64_t>>& ss_scaled) {
  const std::size_t nf = fs_scaled.size();
  MomentAggregates m;
  m.n = n;
  m.feature_sums.resize(nf);
  m.sigmas.assign(nf, 0.0);
  m.cross_sums.assign(nf, std::vector<double>(nf, 0.0));
  for (std::size_t j = 0; j < nf; ++j)
    m.feature_sums[j] = double(to_signed(fs_scaled[j])) / kScale;
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < nf; ++j)
      m.cross_sums[i][j] = double(to_signed(ss_scaled[i][j])) / (kScale * kScale);
  for (std::size_t j = 0; j < nf && n > 0; ++j) {
    // n*SS_jj - FS_j^2 is exact here, so constant columns give sigma == 0.
    __int128 var = static_cast<__int128>(to_signed(ss_scaled[j][j])) * n -
                   static_cast<__int128>(to_signed(fs_scaled[j])) *
                       to_signed(fs_scaled[j]);
    if (var < 0) var = 0;  // unreachable for genuine sums
    m.sigmas[j] = std::sqrt(double(var)) / (kScale * double(n));
  }
  return m;
}

MomentAggregates local_moments(const NumericTable& t) {
  auto sc = quantize(t);
  const std::size_t nf = sc.cols.size();
  std::vector<std::uint64_t> fs(nf);
  std::vector<std::vector<std::uint64_t>> ss(
      nf, std::vector<std::uint64_t>(nf, 0));
  for (std::size_t j = 0; j < nf; ++j) fs[j] = sum_mod64(sc.cols[j]);
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = i; j < nf; ++j)
      ss[i][j] = ss[j][i] = dot_mod64(sc.cols[i], sc.cols[j]);
  return assemble_moments(t.n_rows, fs, ss);
}

CovCorr cov_corr_matrices(const MomentAggregates& m) {
  if (m.n == 0) throw ConfigError("moment aggregates cover zero rows");
  const double N = double(m.n);
  const std::size_t nf = m.feature_sums.size();
  CovCorr out;
  out.cov.assign(nf, std::vector<double>(nf, 0.0));
  out.corr.assign(nf, std::vector<double>(nf, 0.0));
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < nf; ++j)
      out.cov[i][j] = m.cross_sums[i][j] / N -
                      m.feature_sums[i] * m.feature_sums[j] / (N * N);
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < nf; ++j) {
      if (i == j)
        out.corr[i][j] = 1.0;
      else if (m.sigmas[i] == 0.0 || m.sigmas[j] == 0.0)
        out.corr[i][j] = 0.0;
      else
        out.corr[i][j] = out.cov[i][j] / (m.sigmas[i] * m.sigmas[j]);
    }
  return out;
}

std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw ConfigError("matrix is not square");
  double frob = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) frob += a[i][j] * a[i][j];
  frob = std::sqrt(frob);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::fabs(a[i][j] - a[j][i]) > 1e-9 * (1.0 + frob))
        throw ConfigError("matrix is not symmetric");

  const double stop = 1e-12 * frob;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        off = std::max(off, std::fabs(a[i][j]));
    if (off <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p][q];
        if (apq == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        double t;
        if (std::fabs(theta) > 1e154) {
          t = 1.0 / (2.0 * theta);
        } else {
          t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double app = a[p][p], aqq = a[q][q];
        a[p][p] = app - t * apq;
        a[q][q] = aqq + t * apq;
        a[p][q] = a[q][p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = a[p][k] = c * akp - s * akq;
          a[k][q] = a[q][k] = s * akp + c * akq;
        }
      }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a[i][i];
  std::sort(eig.begin(), eig.end(), std::greater<double>());
  return eig;
}

EigenSelection eigen_select(const std::vector<std::vector<double>>& cov,
                            const std::vector<std::vector<double>>& corr,
                            double delta) {
  if (cov.size() != corr.size())
    throw ConfigError("covariance and correlation sizes differ");
  EigenSelection sel;
  sel.delta = delta;
  sel.cov_eigenvalues = jacobi_eigenvalues(cov);
  sel.corr_eigenvalues = jacobi_eigenvalues(corr);
  for (std::size_t k = 0; k < sel.cov_eigenvalues.size(); ++k)
    if (sel.corr_eigenvalues[k] - sel.cov_eigenvalues[k] > delta)
      sel.kept.push_back(k);
  return sel;
}

Task<MomentAggregates> hp_moments_party(
    PartyContext& ctx, const ScaledColumns& rows,
    const std::vector<std::string>& names) {
  ctx.set_round(0);
  TlvWriter w;
  w.put_u64(names.size());
  for (const auto& name : names) w.put_str(name);
  w.put_u64(kScaleBits);
  co_await proto::hello_exchange(ctx, digest16(w.take()),
                                 "schema mismatch between parties");

  const std::size_t nf = rows.cols.size();
  ctx.set_round(1);
  std::uint64_t n = co_await smc::secure_sum(ctx, rows.n_rows);
  ctx.set_round(2);
  std::vector<std::uint64_t> fs(nf);
  for (std::size_t j = 0; j < nf; ++j)
    fs[j] = co_await smc::secure_sum(ctx, sum_mod64(rows.cols[j]));
  ctx.set_round(3);
  std::vector<std::vector<std::uint64_t>> ss(
      nf, std::vector<std::uint64_t>(nf, 0));
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = i; j < nf; ++j) {
      std::uint64_t local = dot_mod64(rows.cols[i], rows.cols[j]);
      std::uint64_t total = co_await smc::secure_sum(ctx, local);
      ss[i][j] = ss[j][i] = total;
    }
  co_return assemble_moments(n, fs, ss);
}

Task<MomentAggregates> vp_moments_party(
    PartyContext& ctx, const ScaledColumns& owned,
    const std::vector<std::size_t>& my_features,
    const std::vector<std::uint32_t>& owner, std::size_t n_rows,
    const std::vector<std::string>& names) {
  const auto me = ctx.id();
  const std::size_t nf = owner.size();

  ctx.set_round(0);
  TlvWriter w;
  w.put_u64(n_rows);
  w.put_u64(nf);
  for (const auto& name : names) w.put_str(name);
  for (std::uint32_t o : owner) w.put_u64(o);
  w.put_u64(kScaleBits);
  co_await proto::hello_exchange(ctx, digest16(w.take()),
                                 "session layout mismatch between parties");

  std::vector<std::optional<std::size_t>> mine(nf);
  for (std::size_t k = 0; k < my_features.size(); ++k)
    mine[my_features[k]] = k;

  std::vector<std::uint64_t> fs(nf, 0);
  std::vector<std::vector<std::uint64_t>> ss(
      nf, std::vector<std::uint64_t>(nf, 0));
  for (std::size_t gf : my_features) fs[gf] = sum_mod64(owned.cols[*mine[gf]]);
  for (std::size_t i : my_features)
    for (std::size_t j : my_features)
      if (i <= j)
        ss[i][j] = ss[j][i] =
            dot_mod64(owned.cols[*mine[i]], owned.cols[*mine[j]]);

  // Cross-owner products, one two-party protocol per pair, fixed global
  // order so every engine walks the same schedule.
  ctx.set_round(1);
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = i + 1; j < nf; ++j) {
      if (owner[i] == owner[j]) continue;
      if (owner[i] == me)
        ss[i][j] = ss[j][i] = co_await smc::secure_dot_product_initiator(
            ctx, owner[j], owned.cols[*mine[i]]);
      else if (owner[j] == me)
        ss[i][j] = ss[j][i] = co_await smc::secure_dot_product_responder(
            ctx, owner[i], owned.cols[*mine[j]]);
    }

  // Announcement phase: owners publish FS_j and SS_jj, then the lower
  // feature's owner publishes every SS_ij. The dot-product peer already
  // holds the cross value and aborts on a mismatched announcement.
  ctx.set_round(2);
  for (std::size_t j = 0; j < nf; ++j) {
    if (owner[j] == me) {
      ctx.broadcast(Kind::Control,
                    moment_payload(kFeatureMoments, j, fs[j], ss[j][j]));
    } else {
      Message msg = co_await ctx.recv(owner[j], Kind::Control);
      TlvReader r(msg.payload);
      if (r.u64() != kFeatureMoments || r.u64() != j)
        throw ProtocolError("moment announcement out of order");
      fs[j] = r.u64();
      ss[j][j] = r.u64();
    }
  }
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = i + 1; j < nf; ++j) {
      if (owner[i] == me) {
        ctx.broadcast(Kind::Control,
                      moment_payload(kCrossMoment, i, j, ss[i][j]));
        continue;
      }
      Message msg = co_await ctx.recv(owner[i], Kind::Control);
      TlvReader r(msg.payload);
      if (r.u64() != kCrossMoment || r.u64() != i || r.u64() != j)
        throw ProtocolError("moment announcement out of order");
      std::uint64_t v = r.u64();
      if (owner[j] == me && v != ss[i][j])
        throw ProtocolError("cross moment disagreement between owners");
      ss[i][j] = ss[j][i] = v;
    }
  co_return assemble_moments(n_rows, fs, ss);
}

namespace {

bool same_moments(const MomentAggregates& a, const MomentAggregates& b) {
  return a.n == b.n && a.feature_sums == b.feature_sums &&
         a.sigmas == b.sigmas && a.cross_sums == b.cross_sums;
}

EigenRun finish_run(MomentAggregates moments, Transcript transcript,
                    double delta) {
  EigenRun run{std::move(moments), {}, {}, std::move(transcript)};
  run.matrices = cov_corr_matrices(run.moments);
  run.selection = eigen_select(run.matrices.cov, run.matrices.corr, delta);
  return run;
}

}  // namespace

EigenRun eigen_hp(const NumericTable& t, std::span<const std::size_t> cuts,
                  double delta, std::uint64_t seed) {
  if (cuts.size() < 2) throw ConfigError("need at least two parties");
  std::size_t sum = 0;
  for (std::size_t c : cuts) sum += c;
  if (sum != t.n_rows)
    throw ConfigError("row counts sum to " + std::to_string(sum) +
                      " but the table has " + std::to_string(t.n_rows));
  auto all = quantize(t);
  std::vector<ScaledColumns> parts(cuts.size());
  std::size_t start = 0;
  for (std::size_t p = 0; p < cuts.size(); ++p) {
    parts[p].n_rows = cuts[p];
    parts[p].cols.resize(all.cols.size());
    for (std::size_t j = 0; j < all.cols.size(); ++j)
      parts[p].cols[j].assign(all.cols[j].begin() + start,
                              all.cols[j].begin() + start + cuts[p]);
    start += cuts[p];
  }
  auto sim = run_parties(cuts.size(), seed, [&](PartyContext& ctx) {
    return hp_moments_party(ctx, parts[ctx.id()], t.feature_names);
  });
  for (std::size_t p = 1; p < sim.outputs.size(); ++p)
    if (!same_moments(sim.outputs[0], sim.outputs[p]))
      throw ProtocolError("parties disagree on the aggregates");
  return finish_run(std::move(sim.outputs[0]), std::move(sim.transcript),
                    delta);
}

EigenRun eigen_vp(const NumericTable& t,
                  const std::vector<std::vector<std::size_t>>& groups,
                  double delta, std::uint64_t seed) {
  if (groups.size() < 2) throw ConfigError("need at least two parties");
  const std::size_t nf = t.columns.size();
  std::vector<std::uint32_t> owner(nf, 0xFFFFFFFFu);
  for (std::size_t p = 0; p < groups.size(); ++p)
    for (std::size_t f : groups[p]) {
      if (f >= nf)
        throw ConfigError("feature index " + std::to_string(f) +
                          " out of range");
      if (owner[f] != 0xFFFFFFFFu)
        throw ConfigError("feature " + std::to_string(f) +
                          " assigned to two parties");
      owner[f] = static_cast<std::uint32_t>(p);
    }
  for (std::size_t f = 0; f < nf; ++f)
    if (owner[f] == 0xFFFFFFFFu)
      throw ConfigError("feature " + std::to_string(f) + " has no owner");

  auto all = quantize(t);
  std::vector<std::vector<std::size_t>> sorted = groups;
  std::vector<ScaledColumns> parts(groups.size());
  for (std::size_t p = 0; p < groups.size(); ++p) {
    std::sort(sorted[p].begin(), sorted[p].end());
    parts[p].n_rows = t.n_rows;
    for (std::size_t f : sorted[p]) parts[p].cols.push_back(all.cols[f]);
  }
  auto sim = run_parties(groups.size(), seed, [&](PartyContext& ctx) {
    return vp_moments_party(ctx, parts[ctx.id()], sorted[ctx.id()], owner,
                            t.n_rows, t.feature_names);
  });
  for (std::size_t p = 1; p < sim.outputs.size(); ++p)
    if (!same_moments(sim.outputs[0], sim.outputs[p]))
      throw ProtocolError("parties disagree on the aggregates");
  return finish_run(std::move(sim.outputs[0]), std::move(sim.transcript),
                    delta);
}

}  // namespace ppfs::eig
