// Command-line front end: ingest a CSV, run the centralized loop or a
// simulated multi-party session, or certify a distributed run against the
// brute-force reference. Reports are JSON with stable field order so a fixed
// seed (plus --no-timestamp) reproduces byte-identical output.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ppfs/csv.hpp"
#include "ppfs/eigen_fs.hpp"
#include "ppfs/errors.hpp"
#include "ppfs/oracle.hpp"
#include "ppfs/partition.hpp"
#include "ppfs/protocols.hpp"
#include "ppfs/rough.hpp"

using json = nlohmann::ordered_json;
using namespace ppfs;

namespace {

struct Options {
  std::string input;
  std::string class_column;
  std::string partition = "horizontal";
  std::string cuts;
  std::string groups;
  unsigned parties = 2;
  std::string protocol = "rsfs";
  double delta = 0.0;
  std::uint64_t seed = 1;
  std::string out;
  std::string transcript;
  bool audit_full = false;
  unsigned fuzz = 0;
  bool no_timestamp = false;
  unsigned bins = 0;
  int corrupt = -1;
};

std::string now_iso8601() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::optional<std::uint32_t> corrupt_of(const Options& opt) {
  if (opt.corrupt < 0) return std::nullopt;
  return static_cast<std::uint32_t>(opt.corrupt);
}

std::size_t find_attr(const std::vector<std::string>& names,
                      const std::string& sel) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == sel) return i;
  if (!sel.empty() &&
      sel.find_first_not_of("0123456789") == std::string::npos) {
    std::size_t idx = std::stoull(sel);
    if (idx < names.size()) return idx;
  }
  throw ConfigError("no attribute named '" + sel + "'");
}

std::vector<std::size_t> shape_cuts(const Options& opt, std::size_t rows) {
  if (!opt.cuts.empty()) return parse_cuts(opt.cuts);
  if (opt.parties < 2) throw ConfigError("need at least two parties");
  std::vector<std::size_t> cuts(opt.parties, rows / opt.parties);
  for (std::size_t p = 0; p < rows % opt.parties; ++p) ++cuts[p];
  return cuts;
}

std::vector<std::vector<std::size_t>> shape_groups(
    const Options& opt, const std::vector<std::string>& names) {
  std::vector<std::vector<std::size_t>> groups;
  if (!opt.groups.empty()) {
    for (const auto& g : parse_groups(opt.groups)) {
      groups.emplace_back();
      for (const auto& sel : g) groups.back().push_back(find_attr(names, sel));
    }
    return groups;
  }
  if (opt.parties < 2) throw ConfigError("need at least two parties");
  groups.resize(opt.parties);
  for (std::size_t a = 0; a < names.size(); ++a)
    groups[a % opt.parties].push_back(a);
  return groups;
}

Partition build_partition(const DecisionTable& t, const Options& opt) {
  if (opt.partition == "horizontal")
    return split_horizontal(t, shape_cuts(opt, t.n_objects()));
  return split_vertical(t, shape_groups(opt, t.attribute_names()));
}

json name_list(const std::vector<std::string>& names,
               const std::vector<std::size_t>& idx) {
  json out = json::array();
  for (std::size_t a : idx) out.push_back(names[a]);
  return out;
}

void fill_selection(json& rep, const std::vector<std::string>& names,
                    const QuickReductResult& res) {
  rep["selected_attributes"] = name_list(names, res.reduct);
  json trace = json::array();
  for (const auto& r : res.rounds) trace.push_back(r.gamma.str());
  rep["gamma_trace"] = trace;
  rep["final_gamma"] = res.gamma.str();
  rep["stop"] = to_string(res.stop);
  if (res.stop == StopReason::uniform_decision) rep["note"] = "uniform decision";
  json evals = json::array();
  for (const auto& ev : res.evaluations)
    evals.push_back({{"round", ev.attrs.size()},
                     {"attrs", name_list(names, ev.attrs)},
                     {"gamma", ev.gamma.str()}});
  rep["evaluations"] = evals;
}

void fill_eigen(json& rep, const eig::EigenSelection& sel) {
  rep["delta"] = sel.delta;
  rep["corr_eigenvalues"] = sel.corr_eigenvalues;
  rep["cov_eigenvalues"] = sel.cov_eigenvalues;
  json diffs = json::array();
  for (std::size_t k = 0; k < sel.corr_eigenvalues.size(); ++k)
    diffs.push_back(sel.corr_eigenvalues[k] - sel.cov_eigenvalues[k]);
  rep["eigen_differences"] = diffs;
  // the eigenvalue-to-feature map is by descending rank; flagged so readers
  // know ranks, not column positions, are being kept
  rep["pairing"] = "rank";
  rep["kept_ranks"] = sel.kept;
}

void fill_transcript_stats(json& rep, const Transcript& tr,
                           std::size_t parties) {
  json msgs;
  msgs["total"] = tr.messages().size();
  msgs["bytes"] = tr.total_bytes();
  json kinds;
  for (const auto& [kind, tot] : tr.per_kind())
    kinds[kind] = {{"count", tot.count}, {"bytes", tot.bytes}};
  msgs["per_kind"] = kinds;
  json per_party = json::array();
  for (const auto& tot : tr.per_party(parties))
    per_party.push_back({{"count", tot.count}, {"bytes", tot.bytes}});
  msgs["per_party_sent"] = per_party;
  rep["messages"] = msgs;
}

void write_transcript(const Options& opt, const Transcript& tr, json& rep) {
  if (opt.transcript.empty()) return;
  std::ofstream f(opt.transcript);
  if (!f) throw ConfigError("cannot write '" + opt.transcript + "'");
  tr.write_ndjson(f, opt.audit_full);
  rep["transcript_file"] = opt.transcript;
}

int cmd_reduct(const Options& opt, json& rep) {
  auto csv = read_csv_file(opt.input);
  rep["input"] = opt.input;
  rep["protocol"] = opt.protocol;
  if (opt.protocol == "eigen") {
    auto nt = numeric_from_csv(csv, opt.class_column);
    auto cc = eig::cov_corr_matrices(eig::local_moments(nt));
    auto sel = eig::eigen_select(cc.cov, cc.corr, opt.delta);
    rep["features"] = nt.feature_names;
    rep["objects"] = nt.n_rows;
    fill_eigen(rep, sel);
    return 0;
  }
  auto t = table_from_csv(csv, opt.class_column, opt.bins);
  rep["attributes"] = t.attribute_names();
  rep["class_column"] = t.decision_name();
  rep["objects"] = t.n_objects();
  fill_selection(rep, t.attribute_names(), quick_reduct(t));
  return 0;
}

int cmd_simulate(const Options& opt, json& rep) {
  auto csv = read_csv_file(opt.input);
  rep["input"] = opt.input;
  rep["protocol"] = opt.protocol;
  rep["seed"] = opt.seed;
  if (opt.protocol == "eigen") {
    auto nt = numeric_from_csv(csv, opt.class_column);
    eig::EigenRun run = [&] {
      if (opt.partition == "horizontal")
        return eig::eigen_hp(nt, shape_cuts(opt, nt.n_rows), opt.delta,
                             opt.seed);
      return eig::eigen_vp(nt, shape_groups(opt, nt.feature_names), opt.delta,
                           opt.seed);
    }();
    rep["partition"] = opt.partition;
    rep["features"] = nt.feature_names;
    rep["objects"] = nt.n_rows;
    fill_eigen(rep, run.selection);
    auto local = eig::cov_corr_matrices(eig::local_moments(nt));
    auto check = eig::eigen_select(local.cov, local.corr, opt.delta);
    rep["matches_local_run"] = check.kept == run.selection.kept;
    std::size_t parties =
        opt.partition == "horizontal" ? shape_cuts(opt, nt.n_rows).size()
                                      : shape_groups(opt, nt.feature_names).size();
    fill_transcript_stats(rep, run.transcript, parties);
    write_transcript(opt, run.transcript, rep);
    return 0;
  }
  auto t = table_from_csv(csv, opt.class_column, opt.bins);
  auto part = build_partition(t, opt);
  auto run = proto::distributed_quick_reduct(part, opt.seed, corrupt_of(opt));
  rep["partition"] = describe(part);
  rep["parties"] = part.party_count();
  rep["objects"] = t.n_objects();
  fill_selection(rep, t.attribute_names(), run.result);
  fill_transcript_stats(rep, run.transcript, part.party_count());
  write_transcript(opt, run.transcript, rep);
  return 0;
}

int cmd_verify(const Options& opt, json& rep) {
  if (opt.fuzz > 0) {
    auto out = oracle::fuzz_campaign(opt.seed, opt.fuzz);
    rep["seed"] = opt.seed;
    rep["fuzz"] = {{"cases", out.cases},
                   {"failures", out.failures},
                   {"notes", out.notes}};
    rep["pass"] = out.failures == 0;
    return out.failures == 0 ? 0 : 5;
  }
  if (opt.protocol == "eigen")
    throw ConfigError("verify covers the rsfs protocol; use simulate for eigen");
  auto csv = read_csv_file(opt.input);
  auto t = table_from_csv(csv, opt.class_column, opt.bins);
  auto part = build_partition(t, opt);
  auto res = oracle::verify_run(part, opt.seed, corrupt_of(opt));
  rep["input"] = opt.input;
  rep["seed"] = opt.seed;
  rep["pass"] = res.pass();
  rep["table_digest"] = res.table_digest;
  rep["partition"] = res.partition_description;
  rep["gammas_match"] = res.gammas_match;
  rep["reducts_match"] = res.reducts_match;
  rep["audit_clean"] = res.audit_clean;
  json subsets = json::array();
  for (const auto& cmp : res.subsets)
    subsets.push_back({{"attrs", name_list(t.attribute_names(), cmp.attrs)},
                       {"distributed", cmp.distributed.str()},
                       {"reference", cmp.reference.str()},
                       {"equal", cmp.equal}});
  rep["subsets"] = subsets;
  rep["messages"] = res.messages;
  rep["bytes"] = res.bytes;
  rep["failures"] = res.failures;
  return res.pass() ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Feature selection over partitioned decision tables"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* c) {
    c->add_option("--input", opt.input, "CSV dataset path");
    c->add_option("--class-column", opt.class_column,
                  "class column name or index (default: last column)");
    c->add_option("--protocol", opt.protocol, "rsfs or eigen")
        ->check(CLI::IsMember({"rsfs", "eigen"}));
    c->add_option("--delta", opt.delta, "eigen keep threshold");
    c->add_option("--seed", opt.seed, "session seed (default 1)");
    c->add_option("--out", opt.out, "write the JSON report here");
    c->add_option("--bins", opt.bins,
                  "equal-width bins for continuous columns (rsfs)");
    c->add_flag("--no-timestamp", opt.no_timestamp,
                "omit timestamp and zero runtime_ms for reproducible output");
  };
  auto add_partition = [&](CLI::App* c) {
    c->add_option("--partition", opt.partition, "horizontal or vertical")
        ->check(CLI::IsMember({"horizontal", "vertical"}));
    c->add_option("--cuts", opt.cuts, "horizontal row counts, e.g. 4,3");
    c->add_option("--groups", opt.groups,
                  "vertical attribute groups, e.g. Age|LEMS");
    c->add_option("--parties", opt.parties,
                  "party count for an even split (default 2)");
    c->add_option("--transcript", opt.transcript, "write NDJSON transcript");
    c->add_flag("--audit-full", opt.audit_full,
                "include base64 payloads in the transcript");
    c->add_option("--corrupt", opt.corrupt)->group("");  // test hook
  };

  auto* reduct = app.add_subcommand("reduct", "centralized selection");
  add_common(reduct);
  auto* simulate =
      app.add_subcommand("simulate", "multi-party protocol simulation");
  add_common(simulate);
  add_partition(simulate);
  auto* verify =
      app.add_subcommand("verify", "certify a run against the references");
  add_common(verify);
  add_partition(verify);
  verify->add_option("--fuzz", opt.fuzz, "run N randomized verification cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (opt.input.empty() && !(command == "verify" && opt.fuzz > 0)) {
    std::cerr << "error: --input is required\n";
    return 3;
  }

  json rep;
  rep["schema"] = "ppfs-report/1";
  rep["command"] = command;
  if (!opt.no_timestamp) rep["timestamp"] = now_iso8601();
  rep["runtime_ms"] = 0;

  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (command == "reduct")
      code = cmd_reduct(opt, rep);
    else if (command == "simulate")
      code = cmd_simulate(opt, rep);
    else
      code = cmd_verify(opt, rep);
  } catch (const IngestError& e) {
    std::cerr << "ingest error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const ProtocolError& e) {
    std::cerr << "protocol abort: " << e.what() << "\n";
    return 4;
  }

  if (!opt.no_timestamp)
    rep["runtime_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
  std::string text = rep.dump(2) + "\n";
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(opt.out);
    if (!f) {
      std::cerr << "config error: cannot write '" << opt.out << "'\n";
      return 3;
    }
    f << text;
  }
  return code;
}
