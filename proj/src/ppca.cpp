#include "ohlc/ppca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ohlc {

namespace {

constexpr double kOffDiagTol = 1e-12;
constexpr int kMaxSweeps = 100;
constexpr double kSymmetryTol = 1e-10;

double max_off_diagonal(const Matrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      worst = std::max(worst, std::abs(a(i, j)));
    }
  }
  return worst;
}

}  // namespace

BarBody bar_body(const OhlcBar& bar) {
  if (bar.close > bar.open) return BarBody::Bull;
  if (bar.close < bar.open) return BarBody::Bear;
  return BarBody::Doji;
}

EigenDecomposition symmetric_eigen(const Matrix& w) {
  const std::size_t p = w.rows();
  if (p == 0 || w.cols() != p) {
    throw Error(Errc::NotSymmetric, "matrix must be square and nonempty");
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      if (std::abs(w(i, j) - w(j, i)) > kSymmetryTol) {
        throw Error(Errc::NotSymmetric,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) +
                        ") differs from its mirror by more than 1e-10");
      }
    }
  }

  Matrix a = w;
  Matrix v = Matrix::identity(p);

  bool converged = (p == 1) || max_off_diagonal(a) < kOffDiagTol;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (std::size_t r = 0; r + 1 < p; ++r) {
      for (std::size_t q = r + 1; q < p; ++q) {
        const double apq = a(r, q);
        if (std::abs(apq) < kOffDiagTol) continue;
        const double tau = (a(q, q) - a(r, r)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const double arr = a(r, r);
        const double aqq = a(q, q);
        a(r, r) = arr - t * apq;
        a(q, q) = aqq + t * apq;
        a(r, q) = 0.0;
        a(q, r) = 0.0;
        for (std::size_t k = 0; k < p; ++k) {
          if (k == r || k == q) continue;
          const double akr = a(k, r);
          const double akq = a(k, q);
          a(k, r) = c * akr - s * akq;
          a(r, k) = a(k, r);
          a(k, q) = s * akr + c * akq;
          a(q, k) = a(k, q);
        }
        for (std::size_t k = 0; k < p; ++k) {
          const double vkr = v(k, r);
          const double vkq = v(k, q);
          v(k, r) = c * vkr - s * vkq;
          v(k, q) = s * vkr + c * vkq;
        }
      }
    }
    converged = max_off_diagonal(a) < kOffDiagTol;
  }
  if (!converged) {
    throw Error(Errc::NoConvergence,
                "sweep budget exhausted, off-diagonal residual " +
                    std::to_string(max_off_diagonal(a)));
  }

  // Descending eigenvalues, ties kept in original column order.
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenDecomposition dec;
  dec.eigenvalues.resize(p);
  dec.eigenvectors = Matrix(p, p);
  for (std::size_t h = 0; h < p; ++h) {
    const std::size_t src = order[h];
    dec.eigenvalues[h] = a(src, src);
    double norm = 0.0;
    for (std::size_t k = 0; k < p; ++k) norm += v(k, src) * v(k, src);
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < p; ++k) dec.eigenvectors(k, h) = v(k, src) / norm;
  }
  return dec;
}

EigenDecomposition orient_signs(EigenDecomposition dec) {
  Matrix& u = dec.eigenvectors;
  for (std::size_t h = 0; h < u.cols(); ++h) {
    std::size_t dominant = 0;
    double best = std::abs(u(0, h));
    for (std::size_t j = 1; j < u.rows(); ++j) {
      if (std::abs(u(j, h)) > best) {
        best = std::abs(u(j, h));
        dominant = j;
      }
    }
    if (u(dominant, h) < 0.0) {
      for (std::size_t j = 0; j < u.rows(); ++j) u(j, h) = -u(j, h);
    }
  }
  return dec;
}

PseudoPcModel fit(const FeatureMatrix& m, std::size_t components) {
  const std::size_t p = m.cols();
  if (components < 1 || components > p) {
    throw Error(Errc::ComponentsOutOfRange,
                "components must lie in [1, " + std::to_string(p) + "], got " +
                    std::to_string(components));
  }
  if (m.rows() < 2) {
    throw Error(Errc::EmptySeries, "need at least 2 observations to fit");
  }

  auto [standardized, stats] = standardize(m);
  const CorrelationMatrices cm = corr_matrix(standardized);
  const EigenDecomposition dec = orient_signs(symmetric_eigen(cm.corr));

  PseudoPcModel model;
  model.variable_labels = m.col_labels();
  model.component_count = components;
  model.eigenvalues = dec.eigenvalues;
  model.variance_contribution.resize(p);
  model.cumulative_contribution.resize(p);
  double acc = 0.0;
  for (std::size_t h = 0; h < p; ++h) {
    model.variance_contribution[h] = dec.eigenvalues[h] / static_cast<double>(p);
    acc += model.variance_contribution[h];
    model.cumulative_contribution[h] = acc;
  }
  model.loadings = Matrix(p, components);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t h = 0; h < components; ++h) {
      model.loadings(j, h) = dec.eigenvectors(j, h);
    }
  }
  model.stats = std::move(stats);
  return model;
}

ScoreMatrix scores(const PseudoPcModel& model, const FeatureMatrix& m) {
  if (m.col_labels() != model.variable_labels) {
    throw Error(Errc::LabelMismatch,
                "input variables do not match the fitted model's");
  }

  // Standardize with the fitted stats rather than refitting them.
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

  ScoreMatrix out(m.row_labels(), model.component_count);
  const auto mcount = static_cast<std::ptrdiff_t>(model.component_count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t h = 0; h < mcount; ++h) {
    auto dst = out.component(h);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double u = model.loadings(j, h);
      const auto col = standardized.column(j);
      for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t d = 0; d < kChannels; ++d) {
          dst[i][d] = dst[i][d] + u * col[i][d];
        }
      }
    }
  }
  return out;
}

OhlcScoreGrid scores_to_ohlc(const ScoreMatrix& s) {
  OhlcScoreGrid grid;
  grid.row_labels = s.row_labels();
  grid.components = s.components();
  grid.bars.resize(s.rows() * s.components());
  for (std::size_t h = 0; h < s.components(); ++h) {
    const auto cells = s.component(h);
    const auto bars = inverse_bars(cells);
    std::copy(bars.begin(), bars.end(), grid.bars.begin() + h * s.rows());
  }
  return grid;
}

}  // namespace ohlc
