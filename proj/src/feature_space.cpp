#include "ohlc/feature_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace ohlc {

namespace {

void check_lengths(std::span<const FeatureVec> a, std::span<const FeatureVec> b) {
  if (a.size() != b.size()) {
    throw Error(Errc::LengthMismatch, "series lengths " + std::to_string(a.size()) +
                                          " vs " + std::to_string(b.size()));
  }
}

// Observation-major accumulation; the serial reference kernels follow the
// same order so results stay bit-identical.
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

// A column whose deviations sit at rounding-noise level is constant for all
// practical purposes; dividing by its sdev would only amplify noise.
bool effectively_constant(const ColumnStats& c) {
  double scale = 1.0;
  for (std::size_t d = 0; d < kChannels; ++d) scale = std::max(scale, std::abs(c.mean[d]));
  return c.sdev <= 1e-12 * scale;
}

void unique_labels(const std::vector<std::string>& labels, const char* axis) {
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw Error(Errc::DuplicateKey, std::string("duplicate ") + axis + " label '" + l + "'");
    }
  }
}

}  // namespace

FeatureMatrix::FeatureMatrix(std::vector<std::string> row_labels,
                             std::vector<std::string> col_labels)
    : row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels)) {
  if (row_labels_.empty() || col_labels_.empty()) {
    throw Error(Errc::EmptyInput, "feature matrix needs at least one row and column");
  }
  unique_labels(row_labels_, "row");
  unique_labels(col_labels_, "column");
  cells_.resize(row_labels_.size() * col_labels_.size());
}

FeatureSeries series_add(std::span<const FeatureVec> a, std::span<const FeatureVec> b) {
  check_lengths(a, b);
  FeatureSeries r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

FeatureSeries series_subtract(std::span<const FeatureVec> a,
                              std::span<const FeatureVec> b) {
  check_lengths(a, b);
  FeatureSeries r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

FeatureSeries series_scale(double beta, std::span<const FeatureVec> a) {
  FeatureSeries r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = beta * a[i];
  return r;
}

double series_inner(std::span<const FeatureVec> a, std::span<const FeatureVec> b) {
  check_lengths(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t d = 0; d < kChannels; ++d) acc += a[i][d] * b[i][d];
  }
  return acc;
}

FeatureVec sample_mean(std::span<const FeatureVec> a) {
  if (a.empty()) throw Error(Errc::EmptySeries, "mean of an empty series");
  FeatureVec sum;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t d = 0; d < kChannels; ++d) sum[d] += a[i][d];
  }
  for (std::size_t d = 0; d < kChannels; ++d) sum[d] /= static_cast<double>(a.size());
  return sum;
}

double sample_cov(std::span<const FeatureVec> a, std::span<const FeatureVec> b) {
  check_lengths(a, b);
  if (a.empty()) throw Error(Errc::EmptySeries, "covariance of an empty series");
  const FeatureVec mean_a = sample_mean(a);
  const FeatureVec mean_b = sample_mean(b);
  return centered_inner(a, b, mean_a, mean_b) /
         (4.0 * static_cast<double>(a.size()));
}

double sample_var(std::span<const FeatureVec> a) { return sample_cov(a, a); }

double correlation(std::span<const FeatureVec> a, std::span<const FeatureVec> b) {
  check_lengths(a, b);
  const FeatureVec mean_a = sample_mean(a);
  const FeatureVec mean_b = sample_mean(b);
  const double n4 = 4.0 * static_cast<double>(a.size());
  ColumnStats sa{mean_a, centered_inner(a, a, mean_a, mean_a) / n4, 0.0};
  ColumnStats sb{mean_b, centered_inner(b, b, mean_b, mean_b) / n4, 0.0};
  sa.sdev = std::sqrt(sa.variance);
  sb.sdev = std::sqrt(sb.variance);
  if (effectively_constant(sa) || effectively_constant(sb)) {
    throw Error(Errc::ZeroVariance, "correlation with a constant series");
  }
  const double cov = centered_inner(a, b, mean_a, mean_b) / n4;
  return cov / (sa.sdev * sb.sdev);
}

SummaryStats column_stats(const FeatureMatrix& m) {
  SummaryStats stats;
  stats.labels = m.col_labels();
  stats.columns.resize(m.cols());
  const auto p = static_cast<std::ptrdiff_t>(m.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < p; ++j) {
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
  SummaryStats stats = column_stats(m);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (effectively_constant(stats.columns[j])) {
      throw Error(Errc::ZeroVariance, "constant column '" + m.col_labels()[j] + "'");
    }
  }
  FeatureMatrix out(m.row_labels(), m.col_labels());
  const auto p = static_cast<std::ptrdiff_t>(m.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < p; ++j) {
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
  const SummaryStats stats = column_stats(m);
  const std::size_t p = m.cols();
  for (std::size_t j = 0; j < p; ++j) {
    if (effectively_constant(stats.columns[j])) {
      throw Error(Errc::ZeroVariance, "constant column '" + m.col_labels()[j] + "'");
    }
  }

  CorrelationMatrices out{Matrix(p, p), Matrix(p, p), m.col_labels()};
  for (std::size_t j = 0; j < p; ++j) {
    out.cov(j, j) = stats.columns[j].variance;
    out.corr(j, j) = 1.0;
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(p * (p - 1) / 2);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = j + 1; k < p; ++k) pairs.emplace_back(j, k);
  }
  const double n4 = 4.0 * static_cast<double>(m.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(pairs.size()); ++idx) {
    const auto [j, k] = pairs[idx];
    const double cov = centered_inner(m.column(j), m.column(k),
                                      stats.columns[j].mean, stats.columns[k].mean) /
                       n4;
    const double r = cov / (stats.columns[j].sdev * stats.columns[k].sdev);
    out.cov(j, k) = cov;
    out.cov(k, j) = cov;
    out.corr(j, k) = r;
    out.corr(k, j) = r;
  }
  return out;
}

}  // namespace ohlc
