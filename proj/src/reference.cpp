#include "ohlc/reference.hpp"

#include <algorithm>
#include <cmath>

namespace ohlc::reference {

namespace {

double centered_inner(std::span<const FeatureVec> a, std::span<const FeatureVec> b,
                      const FeatureVec& mean_a, const FeatureVec& mean_b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t d = 0; d < kChannels; ++d) {
      acc += (a[i][d] - mean_a[d]) * (b[i][d] - mean_b[d]);
    }
  }
  return acc;
}

// Same constant-column rule as the parallel kernels.
bool effectively_constant(const ColumnStats& c) {
  double scale = 1.0;
  for (std::size_t d = 0; d < kChannels; ++d) scale = std::max(scale, std::abs(c.mean[d]));
  return c.sdev <= 1e-12 * scale;
}

}  // namespace

std::vector<FeatureVec> transform_bars(std::span<const OhlcBar> bars) {
  std::vector<FeatureVec> out(bars.size());
  for (std::size_t i = 0; i < bars.size(); ++i) out[i] = to_feature(bars[i]);
  return out;
}

std::vector<OhlcBar> inverse_bars(std::span<const FeatureVec> features) {
  std::vector<OhlcBar> out(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) out[i] = from_feature(features[i]);
  return out;
}

SummaryStats column_stats(const FeatureMatrix& m) {
  SummaryStats stats;
  stats.labels = m.col_labels();
  stats.columns.resize(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const auto col = m.column(j);
    ColumnStats c;
    c.mean = sample_mean(col);
    c.variance = centered_inner(col, col, c.mean, c.mean) /
                 (4.0 * static_cast<double>(col.size()));
    c.sdev = std::sqrt(c.variance);
    stats.columns[j] = c;
  }
  return stats;
}

std::pair<FeatureMatrix, SummaryStats> standardize(const FeatureMatrix& m) {
  SummaryStats stats = reference::column_stats(m);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (effectively_constant(stats.columns[j])) {
      throw Error(Errc::ZeroVariance, "constant column '" + m.col_labels()[j] + "'");
    }
  }
  FeatureMatrix out(m.row_labels(), m.col_labels());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const auto src = m.column(j);
    auto dst = out.column(j);
    const ColumnStats& c = stats.columns[j];
    for (std::size_t i = 0; i < src.size(); ++i) {
      for (std::size_t d = 0; d < kChannels; ++d) {
        dst[i][d] = (src[i][d] - c.mean[d]) / c.sdev;
      }
    }
  }
  return {std::move(out), std::move(stats)};
}

CorrelationMatrices corr_matrix(const FeatureMatrix& m) {
  const SummaryStats stats = reference::column_stats(m);
  const std::size_t p = m.cols();
  for (std::size_t j = 0; j < p; ++j) {
    if (effectively_constant(stats.columns[j])) {
      throw Error(Errc::ZeroVariance, "constant column '" + m.col_labels()[j] + "'");
    }
  }
  CorrelationMatrices out{Matrix(p, p), Matrix(p, p), m.col_labels()};
  const double n4 = 4.0 * static_cast<double>(m.rows());
  for (std::size_t j = 0; j < p; ++j) {
    out.cov(j, j) = stats.columns[j].variance;
    out.corr(j, j) = 1.0;
    for (std::size_t k = j + 1; k < p; ++k) {
      const double cov = centered_inner(m.column(j), m.column(k),
                                        stats.columns[j].mean,
                                        stats.columns[k].mean) /
                         n4;
      const double r = cov / (stats.columns[j].sdev * stats.columns[k].sdev);
      out.cov(j, k) = cov;
      out.cov(k, j) = cov;
      out.corr(j, k) = r;
      out.corr(k, j) = r;
    }
  }
  return out;
}

ScoreMatrix scores(const PseudoPcModel& model, const FeatureMatrix& m) {
  if (m.col_labels() != model.variable_labels) {
    throw Error(Errc::LabelMismatch,
                "input variables do not match the fitted model's");
  }
  FeatureMatrix standardized(m.row_labels(), m.col_labels());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const auto src = m.column(j);
    auto dst = standardized.column(j);
    const ColumnStats& c = model.stats.columns[j];
    for (std::size_t i = 0; i < src.size(); ++i) {
      for (std::size_t d = 0; d < kChannels; ++d) {
        dst[i][d] = (src[i][d] - c.mean[d]) / c.sdev;
      }
    }
  }
  // Definitional form: compose the score column with the series operators.
  ScoreMatrix out(m.row_labels(), model.component_count);
  for (std::size_t h = 0; h < model.component_count; ++h) {
    FeatureSeries acc(m.rows());
    for (std::size_t j = 0; j < m.cols(); ++j) {
      acc = series_add(acc,
                       series_scale(model.loadings(j, h), standardized.column(j)));
    }
    auto dst = out.component(h);
    std::copy(acc.begin(), acc.end(), dst.begin());
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
    std::vector<double> mapes;
    std::vector<double> eigenvalues;
    double q = 0.0;
    int zero_count = 0;
    try {
      const FeatureMatrix sample =
          generate_sample(model, config.n, config.seed + static_cast<std::uint64_t>(r));
      const PseudoPcModel fitted = fit(sample, sample.cols());
      eigenvalues = fitted.eigenvalues;
      q = fitted.cumulative_contribution[config.component_count - 1];
      zero_count = static_cast<int>(
          std::count_if(fitted.eigenvalues.begin(), fitted.eigenvalues.end(),
                        [](double v) { return v < 1e-8; }));
      mapes = eigenvector_mapes(fitted.loadings, reference);
    } catch (const Error&) {
      ++report.failed_repeats;
      continue;
    }
    ++ok_count;
    report.zero_eigen_counts[r] = zero_count;
    q_sum += q;
    double repeat_mean = 0.0;
    for (std::size_t h = 0; h < p; ++h) {
      per_pc[h].push_back(mapes[h]);
      report.mean_eigenvalues[h] += eigenvalues[h];
      repeat_mean += mapes[h];
    }
    per_repeat_mean.push_back(repeat_mean / static_cast<double>(p));
  }
  if (ok_count == 0) return report;

  auto mean_of = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
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

}  // namespace ohlc::reference
