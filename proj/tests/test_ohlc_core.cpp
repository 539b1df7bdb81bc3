#include <doctest.h>

#include <cmath>
#include <random>

#include "ohlc/ohlc_core.hpp"

using namespace ohlc;

namespace {

OhlcBar random_valid_bar(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> log_low(-3.0, 5.0);
  std::uniform_real_distribution<double> log_ratio(-6.0, 2.0);
  std::uniform_real_distribution<double> lambda(0.005, 0.995);
  const double low = std::exp(log_low(rng));
  const double range = low * std::exp(log_ratio(rng));
  OhlcBar b;
  b.low = low;
  b.high = low + range;
  b.open = low + lambda(rng) * range;
  b.close = low + lambda(rng) * range;
  return b;
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace

TEST_CASE("validate_ohlc accepts bars on the closed interval") {
  CHECK_NOTHROW(validate_ohlc({62, 72, 58, 72}));
  CHECK_NOTHROW(validate_ohlc({1.5, 2, 1, 1.5}));
}

TEST_CASE("validate_ohlc names the violated constraint") {
  try {
    validate_ohlc({1.5, 1, 2, 1.5});
    FAIL("expected DegenerateRange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateRange);
  }
  try {
    validate_ohlc({1.5, 2, 0, 1.5});
    FAIL("expected NonPositiveLow");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonPositiveLow);
  }
  try {
    validate_ohlc({2.5, 2, 1, 1.5});
    FAIL("expected OutOfRangeOpenClose");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::OutOfRangeOpenClose);
  }
}

TEST_CASE("preprocess drops suspended all-zero bars") {
  CHECK(!preprocess({0, 0, 0, 0}).has_value());
}

TEST_CASE("preprocess widens flat bars per policy then nudges the lambdas") {
  PreprocessConfig cfg;  // epsilon 0.01, limit-up
  const auto up = preprocess({58, 58, 58, 58}, cfg);
  REQUIRE(up.has_value());
  CHECK(up->low == doctest::Approx(58.0).epsilon(1e-12));
  CHECK(up->high == doctest::Approx(63.8).epsilon(1e-12));
  CHECK(up->open == doctest::Approx(58.058).epsilon(1e-12));
  CHECK(up->close == doctest::Approx(63.742).epsilon(1e-12));
  const auto cc = convex_coeffs(*up);
  CHECK(cc.lambda_open == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(cc.lambda_close == doctest::Approx(0.99).epsilon(1e-9));

  cfg.flat_policy = FlatPolicy::LimitDown;
  const auto down = preprocess({58, 58, 58, 58}, cfg);
  REQUIRE(down.has_value());
  CHECK(down->open == doctest::Approx(63.742).epsilon(1e-12));
  CHECK(down->close == doctest::Approx(58.058).epsilon(1e-12));
}

TEST_CASE("preprocess rebuilds the price from the nudged lambda") {
  const auto bar = preprocess({62, 72, 58, 72});
  REQUIRE(bar.has_value());
  CHECK(bar->open == 62.0);
  CHECK(bar->high == 72.0);
  CHECK(bar->low == 58.0);
  CHECK(bar->close == doctest::Approx(71.86).epsilon(1e-12));
}

TEST_CASE("preprocess rejects inputs outside its domain") {
  CHECK_THROWS_AS(preprocess({-1, 2, 1, 1.5}), Error);
  try {
    preprocess({5, 4, 3, 10});
    FAIL("expected InconsistentBounds");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InconsistentBounds);
  }
  // A zero low that is not a suspension cannot be repaired.
  CHECK_THROWS_AS(preprocess({0, 5, 0, 3}), Error);
}

TEST_CASE("preprocess is idempotent with fixed epsilon") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> price(0.5, 100.0);
  std::uniform_int_distribution<int> mode(0, 4);
  for (int it = 0; it < 2000; ++it) {
    OhlcBar raw;
    const double a = price(rng), b = price(rng);
    raw.low = std::min(a, b);
    raw.high = std::max(a, b) + (mode(rng) == 0 ? 0.0 : 1.0);
    switch (mode(rng)) {
      case 0: raw.open = raw.low; break;
      case 1: raw.open = raw.high; break;
      default: raw.open = 0.5 * (raw.low + raw.high);
    }
    switch (mode(rng)) {
      case 0: raw.close = raw.low; break;
      case 1: raw.close = raw.high; break;
      default: raw.close = 0.25 * raw.low + 0.75 * raw.high;
    }
    if (mode(rng) == 2) raw = {raw.low, raw.low, raw.low, raw.low};
    if (raw.high == raw.low) raw = {raw.low, raw.low, raw.low, raw.low};

    const auto once = preprocess(raw);
    REQUIRE(once.has_value());
    const auto twice = preprocess(*once);
    REQUIRE(twice.has_value());
    CHECK(*twice == *once);
  }
}

TEST_CASE("jittered nudges are seeded and land in (epsilon/2, epsilon)") {
  PreprocessConfig cfg;
  cfg.jitter_seed = 123;
  const auto a = preprocess({58, 58, 58, 58}, cfg);
  const auto b = preprocess({58, 58, 58, 58}, cfg);
  REQUIRE(a.has_value());
  CHECK(*a == *b);  // same seed, same result
  const auto cc = convex_coeffs(*a);
  CHECK(cc.lambda_open > cfg.epsilon / 2);
  CHECK(cc.lambda_open < cfg.epsilon);
  CHECK(cc.lambda_close > 1.0 - cfg.epsilon);
  CHECK(cc.lambda_close < 1.0 - cfg.epsilon / 2);
  // Within one table the draws differ bar to bar.
  NudgeSource nudges(cfg);
  const double n1 = nudges.next();
  const double n2 = nudges.next();
  CHECK(n1 != n2);
}

TEST_CASE("to_feature matches direct evaluation") {
  const FeatureVec zero = to_feature({1.5, 2, 1, 1.5});
  for (std::size_t d = 0; d < kChannels; ++d) CHECK(zero[d] == 0.0);

  const FeatureVec y = to_feature({60, 60.5, 56, 59});
  CHECK(y[0] == doctest::Approx(std::log(56.0)).epsilon(1e-15));
  CHECK(y[1] == doctest::Approx(std::log(4.5)).epsilon(1e-15));
  CHECK(y[2] == doctest::Approx(std::log(8.0)).epsilon(1e-12));         // lambda 8/9
  CHECK(y[3] == doctest::Approx(std::log(2.0)).epsilon(1e-12));         // lambda 2/3
  CHECK(y[0] == doctest::Approx(4.02535).epsilon(1e-5));
  CHECK(y[1] == doctest::Approx(1.50408).epsilon(1e-5));
  CHECK(y[2] == doctest::Approx(2.07944).epsilon(1e-5));
  CHECK(y[3] == doctest::Approx(0.69315).epsilon(1e-5));

  const FeatureVec z = to_feature({1.5, 2, 1, 1.8});
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.0);
  CHECK(z[2] == 0.0);
  CHECK(z[3] == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("to_feature rejects boundary lambdas") {
  try {
    to_feature({62, 72, 58, 72});  // close == high
    FAIL("expected DegenerateLambda");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateLambda);
  }
  CHECK_THROWS_AS(to_feature({58, 72, 58, 70}), Error);  // open == low
}

TEST_CASE("from_feature matches direct evaluation") {
  const OhlcBar b = from_feature({});
  CHECK(b.open == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(b.high == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(b.low == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b.close == doctest::Approx(1.5).epsilon(1e-15));

  FeatureVec v;
  v[0] = 4.02535;
  v[1] = 1.50408;
  v[2] = 2.07944;
  v[3] = 0.69315;
  const OhlcBar c = from_feature(v);
  CHECK(rel_err(c.open, 60.0) < 1e-4);  // inputs only carry 5 decimals
  CHECK(rel_err(c.high, 60.5) < 1e-4);
  CHECK(rel_err(c.low, 56.0) < 1e-4);
  CHECK(rel_err(c.close, 59.0) < 1e-4);

  FeatureVec w;
  w[3] = 1.38629;
  const OhlcBar d = from_feature(w);
  CHECK(rel_err(d.close, 1.8) < 1e-4);
}

TEST_CASE("from_feature reports exp overflow and non-finite input") {
  FeatureVec big;
  big[0] = 1000.0;
  CHECK_THROWS_AS(from_feature(big), Error);
  FeatureVec nan;
  nan[2] = std::nan("");
  try {
    from_feature(nan);
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonFinite);
  }
}

TEST_CASE("bijection: bar -> feature -> bar within 1e-9 relative") {
  std::mt19937_64 rng(42);
  double worst = 0.0;
  for (int it = 0; it < 10000; ++it) {
    const OhlcBar b = random_valid_bar(rng);
    const OhlcBar r = from_feature(to_feature(b));
    worst = std::max({worst, rel_err(r.open, b.open), rel_err(r.high, b.high),
                      rel_err(r.low, b.low), rel_err(r.close, b.close)});
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("bijection: feature -> bar -> feature within 1e-9 absolute") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> comp(-4.0, 4.0);
  double worst = 0.0;
  for (int it = 0; it < 10000; ++it) {
    FeatureVec v;
    for (std::size_t d = 0; d < kChannels; ++d) v[d] = comp(rng);
    const FeatureVec r = to_feature(from_feature(v));
    for (std::size_t d = 0; d < kChannels; ++d) {
      worst = std::max(worst, std::abs(r[d] - v[d]));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("from_feature output is strictly valid across a wide input range") {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> comp(-10.0, 10.0);
  for (int it = 0; it < 10000; ++it) {
    FeatureVec v;
    for (std::size_t d = 0; d < kChannels; ++d) v[d] = comp(rng);
    const OhlcBar b = from_feature(v);
    CHECK(b.low > 0.0);
    CHECK(b.low < b.high);
    CHECK(b.open > b.low);
    CHECK(b.open < b.high);
    CHECK(b.close > b.low);
    CHECK(b.close < b.high);
  }
}

TEST_CASE("close is strictly increasing in the close logit") {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> comp(-3.0, 3.0);
  for (int it = 0; it < 1000; ++it) {
    FeatureVec v;
    for (std::size_t d = 0; d < kChannels; ++d) v[d] = comp(rng);
    FeatureVec v2 = v;
    v2[3] += 0.25;
    CHECK(from_feature(v2).close > from_feature(v).close);
  }
}

TEST_CASE("batch kernels preserve order and propagate errors") {
  std::mt19937_64 rng(46);
  std::vector<OhlcBar> bars;
  for (int i = 0; i < 257; ++i) bars.push_back(random_valid_bar(rng));
  const auto features = transform_bars(bars);
  REQUIRE(features.size() == bars.size());
  for (std::size_t i = 0; i < bars.size(); ++i) {
    CHECK(features[i] == to_feature(bars[i]));
  }
  const auto back = inverse_bars(features);
  for (std::size_t i = 0; i < bars.size(); ++i) {
    CHECK(rel_err(back[i].close, bars[i].close) < 1e-9);
  }

  bars[200] = {62, 72, 58, 72};  // boundary lambda sneaks in
  CHECK_THROWS_AS(transform_bars(bars), Error);
}
