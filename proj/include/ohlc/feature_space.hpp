#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ohlc/matrix.hpp"
#include "ohlc/ohlc_core.hpp"

namespace ohlc {

// One variable observed across n entities: a length-n sequence of feature
// 4-vectors (a column of the feature matrix).
using FeatureSeries = std::vector<FeatureVec>;

// n x p grid of feature 4-vectors, column-major so each variable's series is
// contiguous. Row labels are entities, column labels are variables; labels
// are unique within their axis.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::vector<std::string> row_labels,
                std::vector<std::string> col_labels);

  std::size_t rows() const { return row_labels_.size(); }
  std::size_t cols() const { return col_labels_.size(); }

  FeatureVec& at(std::size_t i, std::size_t j) { return cells_[j * rows() + i]; }
  const FeatureVec& at(std::size_t i, std::size_t j) const {
    return cells_[j * rows() + i];
  }

  std::span<FeatureVec> column(std::size_t j) {
    return {cells_.data() + j * rows(), rows()};
  }
  std::span<const FeatureVec> column(std::size_t j) const {
    return {cells_.data() + j * rows(), rows()};
  }

  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
  std::vector<FeatureVec> cells_;  // column-major
};

struct ColumnStats {
  FeatureVec mean;     // channel-wise mean 4-vector
  double variance = 0.0;  // 1/(4n) convention
  double sdev = 0.0;
};

struct SummaryStats {
  std::vector<std::string> labels;
  std::vector<ColumnStats> columns;
};

struct CorrelationMatrices {
  Matrix corr;  // unit diagonal
  Matrix cov;   // variances on the diagonal
  std::vector<std::string> labels;
};

// Vector-space operators over series of 4-vectors.
FeatureSeries series_add(std::span<const FeatureVec> a, std::span<const FeatureVec> b);
FeatureSeries series_subtract(std::span<const FeatureVec> a, std::span<const FeatureVec> b);
FeatureSeries series_scale(double beta, std::span<const FeatureVec> a);
// Sum over observations and all 4 channels of the elementwise products.
double series_inner(std::span<const FeatureVec> a, std::span<const FeatureVec> b);

FeatureVec sample_mean(std::span<const FeatureVec> a);
// Covariance with the 1/(4n) factor; variance is the a == b case. The same
// convention applies to component score columns downstream.
double sample_cov(std::span<const FeatureVec> a, std::span<const FeatureVec> b);
double sample_var(std::span<const FeatureVec> a);
double correlation(std::span<const FeatureVec> a, std::span<const FeatureVec> b);

// Per-column means, variances and standard deviations (parallel over columns).
SummaryStats column_stats(const FeatureMatrix& m);

// Centers each cell by its column mean 4-vector and divides by the scalar
// column standard deviation. Throws ZeroVariance naming a constant column.
std::pair<FeatureMatrix, SummaryStats> standardize(const FeatureMatrix& m);

// Correlation and covariance matrices of the columns (parallel over pairs).
CorrelationMatrices corr_matrix(const FeatureMatrix& m);

}  // namespace ohlc
