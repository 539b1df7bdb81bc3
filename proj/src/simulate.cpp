#include "ohlc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ohlc/rng.hpp"

namespace ohlc {

namespace {

constexpr double kZeroEigenTol = 1e-8;
constexpr double kDegenerateGap = 1e-8;

Matrix cholesky_lower(const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = a(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
      if (i == j) {
        if (sum <= 0.0) {
          throw Error(Errc::NotSymmetric, "covariance is not positive definite");
        }
        l(i, i) = std::sqrt(sum);
      } else {
        l(i, j) = sum / l(j, j);
      }
    }
  }
  return l;
}

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

// Orthogonal polar factor of a small square matrix, via the eigensolver on
// A'A. Used to align degenerate eigenspace bases (orthogonal Procrustes).
Matrix polar_orthogonal(const Matrix& a) {
  const std::size_t k = a.rows();
  Matrix ata(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double sum = 0.0;
      for (std::size_t r = 0; r < k; ++r) sum += a(r, i) * a(r, j);
      ata(i, j) = sum;
    }
  }
  const EigenDecomposition dec = symmetric_eigen(ata);
  // inv_sqrt = V diag(1/sqrt(s)) V'
  Matrix inv_sqrt(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double sum = 0.0;
      for (std::size_t h = 0; h < k; ++h) {
        const double s = std::max(dec.eigenvalues[h], 1e-24);
        sum += dec.eigenvectors(i, h) * dec.eigenvectors(j, h) / std::sqrt(s);
      }
      inv_sqrt(i, j) = sum;
    }
  }
  Matrix r(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double sum = 0.0;
      for (std::size_t h = 0; h < k; ++h) sum += a(i, h) * inv_sqrt(h, j);
      r(i, j) = sum;
    }
  }
  return r;
}

struct RepeatOutcome {
  bool ok = false;
  std::vector<double> mapes;        // percent, per component
  std::vector<double> eigenvalues;  // full spectrum
  double q = 0.0;
  int zero_count = 0;
};

RepeatOutcome run_repeat(const StructuralModel& model, const SimConfig& config,
                         std::uint64_t seed, const TheoreticalReference& reference) {
  RepeatOutcome out;
  const FeatureMatrix sample = generate_sample(model, config.n, seed);
  const PseudoPcModel fitted = fit(sample, sample.cols());
  out.eigenvalues = fitted.eigenvalues;
  out.q = fitted.cumulative_contribution[config.component_count - 1];
  out.zero_count = static_cast<int>(std::count_if(
      fitted.eigenvalues.begin(), fitted.eigenvalues.end(),
      [](double v) { return v < kZeroEigenTol; }));
  out.mapes = eigenvector_mapes(fitted.loadings, reference);
  out.ok = true;
  return out;
}

}  // namespace

Matrix StructuralModel::default_base_cov() {
  Matrix c(4, 4, 0.25);
  const double sd[4] = {1.0, 2.0, 3.0, 4.0};
  for (std::size_t i = 0; i < 4; ++i) c(i, i) = sd[i] * sd[i];
  return c;
}

FeatureMatrix generate_sample(const StructuralModel& model, std::size_t n,
                              std::uint64_t seed) {
  if (n < 5) {
    throw Error(Errc::EmptySeries, "need n >= 5, got " + std::to_string(n));
  }
  const Matrix l = cholesky_lower(model.base_cov);

  std::vector<std::string> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = "obs" + std::to_string(i + 1);
  FeatureMatrix m(std::move(rows), {"Y1", "Y2", "Y3", "Y4", "Y5", "Y6"});

  NormalSampler sampler(seed);
  for (std::size_t d = 0; d < kChannels; ++d) {
    for (std::size_t i = 0; i < n; ++i) {
      double z[4];
      for (double& zk : z) zk = sampler.next();
      for (std::size_t j = 0; j < 4; ++j) {
        double x = 0.0;
        for (std::size_t k = 0; k <= j; ++k) x += l(j, k) * z[k];
        m.at(i, j)[d] = x;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    m.at(i, 4) = m.at(i, 0) + m.at(i, 1);
    m.at(i, 5) = m.at(i, 2) + m.at(i, 3);
  }
  return m;
}

TheoreticalReference theoretical_correlation(const StructuralModel& model) {
  // Extend the 4x4 base covariance with the two exact sums.
  Matrix cov(6, 6);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) cov(i, j) = model.base_cov(i, j);
  }
  auto extend = [&](std::size_t target, std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < 6; ++j) {
      cov(target, j) = cov(a, j) + cov(b, j);
      cov(j, target) = cov(target, j);
    }
  };
  extend(4, 0, 1);
  extend(5, 2, 3);

  TheoreticalReference ref;
  ref.corr = Matrix(6, 6);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      ref.corr(i, j) = cov(i, j) / std::sqrt(cov(i, i) * cov(j, j));
    }
  }
  ref.eigen = orient_signs(symmetric_eigen(ref.corr));
  return ref;
}

double mape(std::span<const double> estimated, std::span<const double> truth) {
  if (estimated.size() != truth.size()) {
    throw Error(Errc::DimensionMismatch,
                "vector lengths " + std::to_string(estimated.size()) + " vs " +
                    std::to_string(truth.size()));
  }
  const double ne = norm2(estimated);
  const double nt = norm2(truth);
  if (std::abs(ne - 1.0) > 1e-6 || std::abs(nt - 1.0) > 1e-6) {
    throw Error(Errc::NotUnitNorm, "inputs must be unit vectors");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) dot += estimated[i] * truth[i];
  const double flip = dot < 0.0 ? -1.0 : 1.0;
  double diff = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = flip * estimated[i] - truth[i];
    diff += d * d;
  }
  return std::sqrt(diff) / nt * 100.0;
}

std::vector<double> eigenvector_mapes(const Matrix& estimated,
                                      const TheoreticalReference& reference) {
  const std::size_t p = reference.eigen.eigenvalues.size();
  if (estimated.rows() != p || estimated.cols() != p) {
    throw Error(Errc::DimensionMismatch, "estimated basis must be p x p");
  }
  std::vector<double> out(p, 0.0);

  std::size_t start = 0;
  while (start < p) {
    std::size_t stop = start + 1;
    while (stop < p && std::abs(reference.eigen.eigenvalues[stop] -
                                reference.eigen.eigenvalues[stop - 1]) <= kDegenerateGap) {
      ++stop;
    }
    const std::size_t k = stop - start;
    if (k == 1) {
      std::vector<double> est(p), truth(p);
      for (std::size_t j = 0; j < p; ++j) {
        est[j] = estimated(j, start);
        truth[j] = reference.eigen.eigenvectors(j, start);
      }
      out[start] = mape(est, truth);
    } else {
      // Degenerate group: align the estimated basis onto the reference one
      // before the per-vector norms.
      Matrix a(k, k);
      for (std::size_t x = 0; x < k; ++x) {
        for (std::size_t y = 0; y < k; ++y) {
          double sum = 0.0;
          for (std::size_t j = 0; j < p; ++j) {
            sum += estimated(j, start + x) * reference.eigen.eigenvectors(j, start + y);
          }
          a(x, y) = sum;
        }
      }
      const Matrix rot = polar_orthogonal(a);
      for (std::size_t y = 0; y < k; ++y) {
        double diff = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
          double aligned = 0.0;
          for (std::size_t x = 0; x < k; ++x) {
            aligned += estimated(j, start + x) * rot(x, y);
          }
          const double d = aligned - reference.eigen.eigenvectors(j, start + y);
          diff += d * d;
        }
        out[start + y] = std::sqrt(diff) * 100.0;
      }
    }
    start = stop;
  }
  return out;
}

SimReport run_study(const SimConfig& config, const StructuralModel& model) {
  if (config.n < 5 || config.repeats < 1 || config.component_count < 1) {
    throw Error(Errc::EmptyInput, "invalid simulation config");
  }
  const TheoreticalReference reference = theoretical_correlation(model);
  const std::size_t p = reference.eigen.eigenvalues.size();
  if (config.component_count > p) {
    throw Error(Errc::ComponentsOutOfRange,
                "component_count exceeds the variable count");
  }

  std::vector<RepeatOutcome> outcomes(config.repeats);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(config.repeats); ++r) {
    try {
      outcomes[r] = run_repeat(model, config, config.seed + static_cast<std::uint64_t>(r),
                               reference);
    } catch (const Error&) {
      outcomes[r].ok = false;  // recorded, not fatal to the study
    }
  }

  SimReport report;
  report.config = config;
  report.mape_mean_pct.assign(p, 0.0);
  report.mape_sd.assign(p, 0.0);
  report.mean_eigenvalues.assign(p, 0.0);
  report.zero_eigen_counts.assign(config.repeats, -1);

  std::vector<std::vector<double>> per_pc(p);
  std::vector<double> per_repeat_mean;
  std::size_t ok_count = 0;
  double q_sum = 0.0;
  for (std::size_t r = 0; r < config.repeats; ++r) {
    const RepeatOutcome& o = outcomes[r];
    if (!o.ok) {
      ++report.failed_repeats;
      continue;
    }
    ++ok_count;
    report.zero_eigen_counts[r] = o.zero_count;
    q_sum += o.q;
    double repeat_mean = 0.0;
    for (std::size_t h = 0; h < p; ++h) {
      per_pc[h].push_back(o.mapes[h]);
      report.mean_eigenvalues[h] += o.eigenvalues[h];
      repeat_mean += o.mapes[h];
    }
    per_repeat_mean.push_back(repeat_mean / static_cast<double>(p));
  }
  if (ok_count == 0) return report;

  auto mean_of = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  // Study-level spread across repeats (n-1 divisor), reported as a fraction
  // of 1 while means stay in percent.
  auto sd_of_fraction = [&](const std::vector<double>& v_pct) {
    if (v_pct.size() < 2) return 0.0;
    const double m = mean_of(v_pct) / 100.0;
    double acc = 0.0;
    for (double x : v_pct) {
      const double d = x / 100.0 - m;
      acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(v_pct.size() - 1));
  };

  for (std::size_t h = 0; h < p; ++h) {
    report.mape_mean_pct[h] = mean_of(per_pc[h]);
    report.mape_sd[h] = sd_of_fraction(per_pc[h]);
    report.mean_eigenvalues[h] /= static_cast<double>(ok_count);
  }
  report.overall_mape_mean_pct = mean_of(per_repeat_mean);
  report.overall_mape_sd = sd_of_fraction(per_repeat_mean);
  report.q_mean = q_sum / static_cast<double>(ok_count);
  return report;
}

}  // namespace ohlc
