#include <doctest.h>

#include <cmath>
#include <random>

#include "ohlc/feature_space.hpp"

using namespace ohlc;

namespace {

FeatureVec fv(double a, double b, double c, double d) {
  FeatureVec v;
  v[0] = a;
  v[1] = b;
  v[2] = c;
  v[3] = d;
  return v;
}

FeatureSeries random_series(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  FeatureSeries s(n);
  for (auto& v : s) {
    for (std::size_t d = 0; d < kChannels; ++d) v[d] = u(rng);
  }
  return s;
}

FeatureMatrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t p) {
  std::vector<std::string> rows(n), cols(p);
  for (std::size_t i = 0; i < n; ++i) rows[i] = "r" + std::to_string(i);
  for (std::size_t j = 0; j < p; ++j) cols[j] = "c" + std::to_string(j);
  FeatureMatrix m(rows, cols);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < kChannels; ++d) m.at(i, j)[d] = u(rng);
    }
  }
  return m;
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("series operators") {
  const FeatureSeries e1 = {fv(1, 0, 0, 0)};
  const FeatureSeries e2 = {fv(0, 1, 0, 0)};
  CHECK(series_add(e1, e2) == FeatureSeries{fv(1, 1, 0, 0)});

  const FeatureSeries a = {fv(1, 2, 3, 4), fv(0, 0, 0, 0)};
  const FeatureSeries zero = {fv(0, 0, 0, 0), fv(0, 0, 0, 0)};
  CHECK(series_add(a, zero) == a);

  const FeatureSeries b = {fv(1, 1, 1, 1), fv(2, 2, 2, 2)};
  CHECK(series_add(a, b) == FeatureSeries{fv(2, 3, 4, 5), fv(2, 2, 2, 2)});

  CHECK(series_scale(0.0, a) == zero);
  CHECK(series_scale(1.0, a) == a);
  const FeatureSeries one = {fv(1, 2, 3, 4)};
  CHECK(series_scale(2.0, one) == FeatureSeries{fv(2, 4, 6, 8)});
  CHECK(series_subtract(b, b) == zero);

  CHECK_THROWS_AS(series_add(a, e1), Error);
}

TEST_CASE("inner product sums observations and channels") {
  const FeatureSeries e1 = {fv(1, 0, 0, 0)};
  const FeatureSeries e2 = {fv(0, 1, 0, 0)};
  const FeatureSeries ones = {fv(1, 1, 1, 1)};
  CHECK(series_inner(e1, e2) == 0.0);
  CHECK(series_inner(ones, ones) == 4.0);
  const FeatureSeries a = {fv(1, 1, 1, 1), fv(-1, -1, -1, -1)};
  const FeatureSeries b = {fv(2, 2, 2, 2), fv(-2, -2, -2, -2)};
  CHECK(series_inner(a, b) == 16.0);
}

TEST_CASE("sample mean") {
  const FeatureSeries a = {fv(1, 1, 1, 1), fv(-1, -1, -1, -1)};
  CHECK(sample_mean(a) == fv(0, 0, 0, 0));
  const FeatureSeries single = {fv(2, 3, 4, 5)};
  CHECK(sample_mean(single) == fv(2, 3, 4, 5));
  const FeatureSeries pair = {fv(1, 2, 3, 4), fv(3, 2, 1, 0)};
  CHECK(sample_mean(pair) == fv(2, 2, 2, 2));
  CHECK_THROWS_AS(sample_mean(FeatureSeries{}), Error);
}

TEST_CASE("covariance, variance and correlation use the 1/(4n) factor") {
  const FeatureSeries a = {fv(1, 1, 1, 1), fv(-1, -1, -1, -1)};
  CHECK(sample_var(a) == doctest::Approx(1.0).epsilon(1e-15));
  const FeatureSeries b = series_scale(2.0, a);
  CHECK(sample_cov(a, b) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(correlation(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  const FeatureSeries zero = {fv(0, 0, 0, 0), fv(0, 0, 0, 0)};
  CHECK(sample_cov(a, zero) == 0.0);
  CHECK_THROWS_AS(correlation(a, zero), Error);
}

TEST_CASE("covariance equals the brute-force double loop") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> len(1, 20);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = len(rng);
    const FeatureSeries a = random_series(rng, n);
    const FeatureSeries b = random_series(rng, n);
    // Independent oracle, straight from the definition.
    double ma[4] = {0, 0, 0, 0}, mb[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < 4; ++d) {
        ma[d] += a[i][d] / static_cast<double>(n);
        mb[d] += b[i][d] / static_cast<double>(n);
      }
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < 4; ++d) {
        acc += (a[i][d] - ma[d]) * (b[i][d] - mb[d]);
      }
    }
    const double oracle = acc / (4.0 * static_cast<double>(n));
    CHECK(sample_cov(a, b) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("inner product axioms hold on random series") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> beta_dist(-3.0, 3.0);
  std::uniform_int_distribution<std::size_t> len(1, 30);
  for (int it = 0; it < 500; ++it) {
    const std::size_t n = len(rng);
    const FeatureSeries a = random_series(rng, n);
    const FeatureSeries b = random_series(rng, n);
    const FeatureSeries c = random_series(rng, n);
    const double beta = beta_dist(rng);

    CHECK(series_inner(a, a) >= 0.0);
    CHECK(series_inner(a, b) == series_inner(b, a));
    CHECK(close_rel(series_inner(a, series_add(b, c)),
                    series_inner(a, b) + series_inner(a, c), 1e-10));
    CHECK(close_rel(series_inner(series_scale(beta, a), b),
                    beta * series_inner(a, b), 1e-10));
  }
  const FeatureSeries zero = {fv(0, 0, 0, 0), fv(0, 0, 0, 0)};
  CHECK(series_inner(zero, zero) == 0.0);
  FeatureSeries nearly = zero;
  nearly[1][3] = 1e-12;
  CHECK(series_inner(nearly, nearly) > 0.0);
}

TEST_CASE("standardize centers and scales each column") {
  FeatureMatrix m({"r1", "r2"}, {"a", "b"});
  m.at(0, 0) = fv(1, 1, 1, 1);
  m.at(1, 0) = fv(-1, -1, -1, -1);
  m.at(0, 1) = fv(3, 3, 3, 3);
  m.at(1, 1) = fv(1, 1, 1, 1);

  const auto [std_m, stats] = standardize(m);
  CHECK(std_m.at(0, 0) == fv(1, 1, 1, 1));  // already standardized
  CHECK(std_m.at(1, 0) == fv(-1, -1, -1, -1));
  CHECK(std_m.at(0, 1) == fv(1, 1, 1, 1));  // mean (2,2,2,2), sdev 1
  CHECK(std_m.at(1, 1) == fv(-1, -1, -1, -1));
  CHECK(stats.columns[1].mean == fv(2, 2, 2, 2));
  CHECK(stats.columns[1].sdev == doctest::Approx(1.0).epsilon(1e-15));

  // Standardizing standardized data changes nothing.
  const auto [again, stats2] = standardize(std_m);
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t d = 0; d < kChannels; ++d) {
        CHECK(again.at(i, j)[d] == doctest::Approx(std_m.at(i, j)[d]).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("standardized columns have zero mean and unit variance") {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 50; ++it) {
    std::uniform_int_distribution<std::size_t> nd(2, 40), pd(1, 6);
    const FeatureMatrix m = random_matrix(rng, nd(rng), pd(rng));
    const auto [std_m, stats] = standardize(m);
    for (std::size_t j = 0; j < std_m.cols(); ++j) {
      const FeatureVec mean = sample_mean(std_m.column(j));
      for (std::size_t d = 0; d < kChannels; ++d) CHECK(std::abs(mean[d]) < 1e-12);
      CHECK(std::abs(sample_var(std_m.column(j)) - 1.0) < 1e-12);
    }
    const CorrelationMatrices cm = corr_matrix(std_m);
    for (std::size_t j = 0; j < std_m.cols(); ++j) {
      for (std::size_t k = 0; k < std_m.cols(); ++k) {
        CHECK(std::abs(cm.corr(j, k) - cm.cov(j, k)) < 1e-12);
      }
    }
  }
}

TEST_CASE("standardize rejects constant columns by name") {
  FeatureMatrix m({"r1", "r2"}, {"ok", "flat"});
  m.at(0, 0) = fv(1, 2, 3, 4);
  m.at(1, 0) = fv(0, 1, 2, 3);
  m.at(0, 1) = fv(5, 5, 5, 5);
  m.at(1, 1) = fv(5, 5, 5, 5);
  try {
    standardize(m);
    FAIL("expected ZeroVariance");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroVariance);
    CHECK(std::string(e.what()).find("flat") != std::string::npos);
  }
  CHECK_THROWS_AS(corr_matrix(m), Error);
}

TEST_CASE("correlation matrix structure") {
  std::mt19937_64 rng(14);
  const FeatureMatrix one = random_matrix(rng, 10, 1);
  const CorrelationMatrices c1 = corr_matrix(one);
  CHECK(c1.corr.rows() == 1);
  CHECK(c1.corr(0, 0) == 1.0);

  // Two identical columns correlate perfectly.
  FeatureMatrix twin({"r0", "r1", "r2"}, {"a", "b"});
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t d = 0; d < kChannels; ++d) {
      twin.at(i, 0)[d] = u(rng);
      twin.at(i, 1)[d] = twin.at(i, 0)[d];
    }
  }
  const CorrelationMatrices c2 = corr_matrix(twin);
  CHECK(c2.corr(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c2.corr(1, 0) == c2.corr(0, 1));
}

TEST_CASE("Cauchy-Schwarz bounds the covariance and correlation") {
  std::mt19937_64 rng(15);
  for (int it = 0; it < 100; ++it) {
    std::uniform_int_distribution<std::size_t> nd(2, 30);
    const std::size_t n = nd(rng);
    const FeatureSeries a = random_series(rng, n);
    const FeatureSeries b = random_series(rng, n);
    const double sa = std::sqrt(sample_var(a));
    const double sb = std::sqrt(sample_var(b));
    CHECK(std::abs(sample_cov(a, b)) <= sa * sb + 1e-12);
    CHECK(std::abs(correlation(a, b)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("feature matrix rejects duplicate labels") {
  CHECK_THROWS_AS(FeatureMatrix({"r1", "r1"}, {"a"}), Error);
  CHECK_THROWS_AS(FeatureMatrix({"r1"}, {"a", "a"}), Error);
}
