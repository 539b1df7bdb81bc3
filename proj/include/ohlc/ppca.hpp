#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ohlc/feature_space.hpp"
#include "ohlc/matrix.hpp"
#include "ohlc/ohlc_core.hpp"

namespace ohlc {

// Eigenpairs of a symmetric matrix: eigenvalues descending, eigenvector h in
// column h of an orthonormal matrix.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
};

// Fitted component model. The full spectrum is kept (the scree chart and the
// contribution table need it); loadings are truncated to the requested
// component count.
struct PseudoPcModel {
  std::vector<std::string> variable_labels;      // p
  std::size_t component_count = 0;               // m <= p
  std::vector<double> eigenvalues;               // p, descending
  std::vector<double> variance_contribution;     // p, lambda_h / p
  std::vector<double> cumulative_contribution;   // p, prefix sums
  Matrix loadings;                               // p x m, sign-oriented
  SummaryStats stats;                            // fitted standardization
};

// n x m grid of score 4-vectors, column-major per component.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::vector<std::string> row_labels, std::size_t components)
      : row_labels_(std::move(row_labels)),
        components_(components),
        cells_(row_labels_.size() * components) {}

  std::size_t rows() const { return row_labels_.size(); }
  std::size_t components() const { return components_; }

  FeatureVec& at(std::size_t i, std::size_t h) { return cells_[h * rows() + i]; }
  const FeatureVec& at(std::size_t i, std::size_t h) const {
    return cells_[h * rows() + i];
  }

  std::span<FeatureVec> component(std::size_t h) {
    return {cells_.data() + h * rows(), rows()};
  }
  std::span<const FeatureVec> component(std::size_t h) const {
    return {cells_.data() + h * rows(), rows()};
  }

  const std::vector<std::string>& row_labels() const { return row_labels_; }

  friend bool operator==(const ScoreMatrix&, const ScoreMatrix&) = default;

 private:
  std::vector<std::string> row_labels_;
  std::size_t components_ = 0;
  std::vector<FeatureVec> cells_;  // column-major
};

// Score cells mapped back to bar form, one bar per (entity, component).
struct OhlcScoreGrid {
  std::vector<std::string> row_labels;
  std::size_t components = 0;
  std::vector<OhlcBar> bars;  // column-major, like ScoreMatrix

  const OhlcBar& at(std::size_t i, std::size_t h) const {
    return bars[h * row_labels.size() + i];
  }
};

// Body color classification for candlestick rendering.
enum class BarBody { Bull, Bear, Doji };
BarBody bar_body(const OhlcBar& bar);

// Cyclic Jacobi rotations until every off-diagonal magnitude is below 1e-12,
// with a 100-sweep budget. Eigenpairs sorted by descending eigenvalue, ties
// kept in original column order. Throws NotSymmetric / NoConvergence.
EigenDecomposition symmetric_eigen(const Matrix& w);

// Canonical sign choice: per eigenvector, if the largest-magnitude loading
// (smallest index on ties) is negative, the whole vector is negated.
EigenDecomposition orient_signs(EigenDecomposition dec);

// Full pipeline on a feature matrix: standardize, correlation matrix,
// eigendecomposition, sign orientation, truncation, contribution rates.
PseudoPcModel fit(const FeatureMatrix& m, std::size_t components);

// Score columns F_h = sum_j u_hj * Y*_j on input standardized with the
// model's stored stats (parallel over components). Column labels must match
// the model's. Throws LabelMismatch.
ScoreMatrix scores(const PseudoPcModel& model, const FeatureMatrix& m);

// Cellwise inverse transform of score 4-vectors back to bar form.
OhlcScoreGrid scores_to_ohlc(const ScoreMatrix& s);

}  // namespace ohlc
