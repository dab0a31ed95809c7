#pragma once

// Eigenvalue-based feature selection over numeric data, the alternative
// backend to the rough-set loop. Parties aggregate second-order moments
// (counts, per-feature sums, cross sums) with the secure primitives, every
// party assembles the same covariance and correlation matrices, and the
// eigen step runs locally: both spectra sorted descending, a feature rank
// kept when its correlation eigenvalue exceeds its covariance eigenvalue by
// more than delta.
//
// All secure arithmetic runs over integers, so numeric input is quantized
// once to a fixed-point grid of 2^-20 before anything is summed. Distributed
// and local runs then share the exact same integers and produce bit-identical
// moments; inputs that already sit on the grid (integers, quarters, ...)
// lose nothing at all.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ppfs/csv.hpp"
#include "ppfs/netsim.hpp"
#include "ppfs/task.hpp"

namespace ppfs::eig {

inline constexpr int kScaleBits = 20;

// Control codes for the vertical announcement phase (session hello reuses
// the selection protocols' code 0).
inline constexpr std::uint64_t kFeatureMoments = 10;
inline constexpr std::uint64_t kCrossMoment = 11;

// Two's-complement fixed-point columns; value v is stored as the 64-bit
// pattern of llround(v * 2^20).
struct ScaledColumns {
  std::vector<std::vector<std::uint64_t>> cols;  // per feature
  std::size_t n_rows = 0;
};

// Quantize and bound-check: with n rows and worst scaled magnitude B the
// pipeline needs n * B^2 < 2^62 so every sum and dot product stays inside
// the signed range. Non-finite values and oversized data are rejected.
ScaledColumns quantize(const NumericTable& t);

struct MomentAggregates {
  std::uint64_t n = 0;
  std::vector<double> feature_sums;             // FS_j = sum of column j
  std::vector<double> sigmas;                   // population sigma_j
  std::vector<std::vector<double>> cross_sums;  // SS_ij = sum of x_i * x_j
};

// Unscale exact integer totals into the published aggregate form. sigma_j
// comes from the exact test n*SS_jj - FS_j^2, so a constant column yields
// exactly 0 rather than a rounding residue.
MomentAggregates assemble_moments(
    std::uint64_t n, const std::vector<std::uint64_t>& fs_scaled,
    const std::vector<std::vector<std::uint64_t>>& ss_scaled);

// The whole pipeline on one machine; bit-identical to what every party of a
// distributed run assembles.
MomentAggregates local_moments(const NumericTable& t);

struct CovCorr {
  std::vector<std::vector<double>> cov;
  std::vector<std::vector<double>> corr;
};

// COV(i,j) = SS_ij/N - FS_i*FS_j/N^2. CORR(i,j) = COV(i,j)/(sigma_i*sigma_j)
// with unit diagonal; rows of zero-variance features are 0 off the diagonal.
CovCorr cov_corr_matrices(const MomentAggregates& m);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
// descending. Sweeps stop when every off-diagonal is below 1e-12 times the
// Frobenius norm of the input.
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a);

struct EigenSelection {
  double delta = 0;
  std::vector<double> corr_eigenvalues;  // descending
  std::vector<double> cov_eigenvalues;   // descending
  std::vector<std::size_t> kept;         // ranks with corr - cov > delta
};

EigenSelection eigen_select(const std::vector<std::vector<double>>& cov,
                            const std::vector<std::vector<double>>& corr,
                            double delta);

// Party engines. Horizontal: every aggregate is a secure sum over per-party
// partial moments. Vertical: single-owner moments are computed locally and
// announced, cross-owner SS_ij runs the two-party secure dot product with
// the lower feature's owner as initiator; results are broadcast so each
// party finishes with the full aggregate set, and the second participant of
// every dot product cross-checks the announcement.
Task<MomentAggregates> hp_moments_party(PartyContext& ctx,
                                        const ScaledColumns& rows,
                                        const std::vector<std::string>& names);
Task<MomentAggregates> vp_moments_party(
    PartyContext& ctx, const ScaledColumns& owned,
    const std::vector<std::size_t>& my_features,
    const std::vector<std::uint32_t>& owner, std::size_t n_rows,
    const std::vector<std::string>& names);

struct EigenRun {
  MomentAggregates moments;
  CovCorr matrices;
  EigenSelection selection;
  Transcript transcript;
};

// Drivers: split, simulate, assemble, select. Row counts must cover the
// table (horizontal), feature groups must partition the features
// (vertical); two parties minimum.
EigenRun eigen_hp(const NumericTable& t, std::span<const std::size_t> cuts,
                  double delta, std::uint64_t seed);
EigenRun eigen_vp(const NumericTable& t,
                  const std::vector<std::vector<std::size_t>>& groups,
                  double delta, std::uint64_t seed);

}  // namespace ppfs::eig
