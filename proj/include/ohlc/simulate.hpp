#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ohlc/feature_space.hpp"
#include "ohlc/matrix.hpp"
#include "ohlc/ppca.hpp"

namespace ohlc {

// Generating design for the redundancy study: four base variables with
// standard deviations 1..4 and all pairwise covariances 0.25, plus two exact
// sums (Y5 = Y1 + Y2, Y6 = Y3 + Y4).
struct StructuralModel {
  Matrix base_cov = default_base_cov();

  static Matrix default_base_cov();
};

struct SimConfig {
  std::size_t n = 50;           // sample size, >= 5
  std::size_t repeats = 300;
  std::uint64_t seed = 0;
  std::size_t component_count = 4;  // cumulative-contribution checkpoint
};

struct SimReport {
  SimConfig config;
  // Index 0..p-1 per component; means in percent, sds as fractions
  // (study-level n-1 divisor across repeats).
  std::vector<double> mape_mean_pct;
  std::vector<double> mape_sd;
  double overall_mape_mean_pct = 0.0;
  double overall_mape_sd = 0.0;
  double q_mean = 0.0;                       // mean Q at component_count
  std::vector<int> zero_eigen_counts;        // per repeat, eigenvalues < 1e-8
  std::vector<double> mean_eigenvalues;      // per component across repeats
  std::size_t failed_repeats = 0;
};

struct TheoreticalReference {
  Matrix corr;                // 6x6 implied correlation
  EigenDecomposition eigen;   // ground-truth eigenpairs (sign-oriented)
};

// Draws n observations of the six variables. Per channel, the four base
// variables are jointly normal via a Cholesky factor of base_cov; columns 5
// and 6 are the exact channelwise sums. Identical (seed, n) reproduce the
// matrix bit-for-bit.
FeatureMatrix generate_sample(const StructuralModel& model, std::size_t n,
                              std::uint64_t seed);

// Correlation matrix implied by the structural model, plus its
// eigendecomposition as ground truth for the eigenvector error metric.
TheoreticalReference theoretical_correlation(const StructuralModel& model);

// Eigenvector error in percent: ||u_hat - u|| / ||u|| * 100 after flipping
// u_hat when its dot product with u is negative. Inputs must be unit-norm and
// equal length. Throws DimensionMismatch / NotUnitNorm.
double mape(std::span<const double> estimated, std::span<const double> truth);

// Per-component errors of a whole estimated basis against the reference.
// Components whose reference eigenvalues coincide within 1e-8 form a
// degenerate group; the estimated group basis is aligned onto the reference
// one by orthogonal Procrustes before the per-vector norms.
std::vector<double> eigenvector_mapes(const Matrix& estimated,
                                      const TheoreticalReference& reference);

// Full study at one sample size: per repeat (seed + repeat index) generate,
// fit, collect Q and per-component errors; aggregate mean and n-1 standard
// deviation. Repeats run in parallel; aggregation order is fixed, so the
// report is deterministic. Fit errors are recorded per repeat, not fatal.
SimReport run_study(const SimConfig& config, const StructuralModel& model = {});

}  // namespace ohlc
