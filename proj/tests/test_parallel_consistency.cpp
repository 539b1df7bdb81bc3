#include <doctest.h>

#include <random>

#include "ohlc/csv.hpp"
#include "ohlc/reference.hpp"
#include "ohlc/rng.hpp"

using namespace ohlc;

namespace {

FeatureMatrix random_matrix(std::uint64_t seed, std::size_t n, std::size_t p) {
  std::vector<std::string> rows(n), cols(p);
  for (std::size_t i = 0; i < n; ++i) rows[i] = "r" + std::to_string(i);
  for (std::size_t j = 0; j < p; ++j) cols[j] = "c" + std::to_string(j);
  FeatureMatrix m(rows, cols);
  NormalSampler sampler(seed);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < kChannels; ++d) m.at(i, j)[d] = sampler.next();
    }
  }
  return m;
}

std::vector<OhlcBar> random_bars(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_low(-2.0, 4.0);
  std::uniform_real_distribution<double> log_ratio(-4.0, 1.0);
  std::uniform_real_distribution<double> lambda(0.01, 0.99);
  std::vector<OhlcBar> bars(count);
  for (auto& b : bars) {
    b.low = std::exp(log_low(rng));
    const double range = b.low * std::exp(log_ratio(rng));
    b.high = b.low + range;
    b.open = b.low + lambda(rng) * range;
    b.close = b.low + lambda(rng) * range;
  }
  return bars;
}

}  // namespace

TEST_CASE("parallel transform kernels equal the serial reference bitwise") {
  const auto bars = random_bars(51, 10000);
  const auto par = transform_bars(bars);
  const auto ser = reference::transform_bars(bars);
  CHECK(par == ser);
  CHECK(inverse_bars(par) == reference::inverse_bars(ser));
}

TEST_CASE("parallel statistics kernels equal the serial reference bitwise") {
  const FeatureMatrix m = random_matrix(52, 400, 12);

  const SummaryStats sp = column_stats(m);
  const SummaryStats ss = reference::column_stats(m);
  REQUIRE(sp.columns.size() == ss.columns.size());
  for (std::size_t j = 0; j < sp.columns.size(); ++j) {
    CHECK(sp.columns[j].mean == ss.columns[j].mean);
    CHECK(sp.columns[j].variance == ss.columns[j].variance);
    CHECK(sp.columns[j].sdev == ss.columns[j].sdev);
  }

  const auto std_p = standardize(m);
  const auto std_s = reference::standardize(m);
  CHECK(std_p.first == std_s.first);

  const CorrelationMatrices cp = corr_matrix(m);
  const CorrelationMatrices cs = reference::corr_matrix(m);
  CHECK(cp.corr == cs.corr);
  CHECK(cp.cov == cs.cov);

  const PseudoPcModel model = fit(m, m.cols());
  CHECK(scores(model, m) == reference::scores(model, m));
}

TEST_CASE("fixture pipeline equals the serial reference bitwise") {
  const FeatureMatrix m = pivot(parse_feature_csv(std::string(OHLC_DATA_DIR) +
                                                  "/features_std.csv"));
  const CorrelationMatrices cp = corr_matrix(m);
  const CorrelationMatrices cs = reference::corr_matrix(m);
  CHECK(cp.corr == cs.corr);
  const PseudoPcModel model = fit(m, 2);
  CHECK(scores(model, m) == reference::scores(model, m));
}

TEST_CASE("parallel study equals the serial reference bitwise") {
  const SimConfig config{60, 8, 1234, 4};
  const SimReport par = run_study(config);
  const SimReport ser = reference::run_study(config);
  CHECK(par.mape_mean_pct == ser.mape_mean_pct);
  CHECK(par.mape_sd == ser.mape_sd);
  CHECK(par.overall_mape_mean_pct == ser.overall_mape_mean_pct);
  CHECK(par.overall_mape_sd == ser.overall_mape_sd);
  CHECK(par.q_mean == ser.q_mean);
  CHECK(par.zero_eigen_counts == ser.zero_eigen_counts);
  CHECK(par.mean_eigenvalues == ser.mean_eigenvalues);
  CHECK(par.failed_repeats == ser.failed_repeats);
}
