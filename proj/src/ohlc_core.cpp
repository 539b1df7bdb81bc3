#include "ohlc/ohlc_core.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

namespace ohlc {

namespace {

std::string bar_str(const OhlcBar& b) {
  std::ostringstream oss;
  oss << "(" << b.open << ", " << b.high << ", " << b.low << ", " << b.close << ")";
  return oss.str();
}

// Numerically stable logistic, exact inverse of the log-odds in real
// arithmetic.
double logistic(double t) {
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double z = std::exp(t);
  return z / (1.0 + z);
}

}  // namespace

FeatureVec operator+(const FeatureVec& a, const FeatureVec& b) {
  FeatureVec r;
  for (std::size_t d = 0; d < kChannels; ++d) r[d] = a[d] + b[d];
  return r;
}

FeatureVec operator-(const FeatureVec& a, const FeatureVec& b) {
  FeatureVec r;
  for (std::size_t d = 0; d < kChannels; ++d) r[d] = a[d] - b[d];
  return r;
}

FeatureVec operator*(double beta, const FeatureVec& a) {
  FeatureVec r;
  for (std::size_t d = 0; d < kChannels; ++d) r[d] = beta * a[d];
  return r;
}

NudgeSource::NudgeSource(const PreprocessConfig& config)
    : epsilon_(config.epsilon),
      jitter_(config.jitter_seed.has_value()),
      rng_(config.jitter_seed.value_or(0)) {
  if (!(config.epsilon > 0.0) || !(config.epsilon < 0.5)) {
    throw Error(Errc::BadNumeric,
                "epsilon must lie in (0, 0.5), got " + std::to_string(config.epsilon));
  }
}

double NudgeSource::next() {
  if (!jitter_) return epsilon_;
  const double u = (rng_() >> 11) * 0x1.0p-53;  // [0, 1)
  return epsilon_ / 2.0 + u * (epsilon_ / 2.0);
}

OhlcBar validate_ohlc(const OhlcBar& bar) {
  if (!(bar.low > 0.0)) {
    throw Error(Errc::NonPositiveLow, "low must be > 0 in " + bar_str(bar));
  }
  if (!(bar.low < bar.high)) {
    throw Error(Errc::DegenerateRange, "low must be < high in " + bar_str(bar));
  }
  if (!(bar.open >= bar.low && bar.open <= bar.high) ||
      !(bar.close >= bar.low && bar.close <= bar.high)) {
    throw Error(Errc::OutOfRangeOpenClose,
                "open/close must lie in [low, high] in " + bar_str(bar));
  }
  return bar;
}

ConvexCoeffs convex_coeffs(const OhlcBar& bar) {
  const double range = bar.high - bar.low;
  return {(bar.open - bar.low) / range, (bar.close - bar.low) / range};
}

std::optional<OhlcBar> preprocess(const OhlcBar& raw, const PreprocessConfig& config,
                                  NudgeSource& nudges) {
  if (raw.open < 0.0 || raw.high < 0.0 || raw.low < 0.0 || raw.close < 0.0) {
    throw Error(Errc::NegativePrice, "negative price in " + bar_str(raw));
  }
  const bool flat =
      raw.open == raw.high && raw.high == raw.low && raw.low == raw.close;
  if (flat && raw.low == 0.0) return std::nullopt;  // suspended, drop

  OhlcBar bar = raw;
  if (flat) {
    // Widen the degenerate interval in the direction the cap occurred.
    if (config.flat_policy == FlatPolicy::LimitUp) {
      bar.close *= 1.1;
      bar.high *= 1.1;
    } else {
      bar.open *= 1.1;
      bar.high *= 1.1;
    }
  } else if (bar.low > std::min(bar.open, bar.close) ||
             bar.high < std::max(bar.open, bar.close)) {
    throw Error(Errc::InconsistentBounds,
                "open/close outside [low, high] in " + bar_str(raw));
  }

  // Bounds imply low <= high with equality only for flat bars, which were
  // widened above, so the range is positive here.
  const double range = bar.high - bar.low;
  auto [lambda_open, lambda_close] = convex_coeffs(bar);
  if (lambda_open <= 0.0) {
    bar.open = bar.low + nudges.next() * range;
  } else if (lambda_open >= 1.0) {
    bar.open = bar.low + (1.0 - nudges.next()) * range;
  }
  if (lambda_close <= 0.0) {
    bar.close = bar.low + nudges.next() * range;
  } else if (lambda_close >= 1.0) {
    bar.close = bar.low + (1.0 - nudges.next()) * range;
  }

  return validate_ohlc(bar);
}

std::optional<OhlcBar> preprocess(const OhlcBar& raw, const PreprocessConfig& config) {
  NudgeSource nudges(config);
  return preprocess(raw, config, nudges);
}

FeatureVec to_feature(const OhlcBar& bar) {
  validate_ohlc(bar);
  const auto [lambda_open, lambda_close] = convex_coeffs(bar);
  if (lambda_open <= 0.0 || lambda_open >= 1.0 || lambda_close <= 0.0 ||
      lambda_close >= 1.0) {
    throw Error(Errc::DegenerateLambda,
                "open/close on the range boundary in " + bar_str(bar) +
                    "; preprocess the bar first");
  }
  FeatureVec y;
  y[0] = std::log(bar.low);
  y[1] = std::log(bar.high - bar.low);
  y[2] = std::log(lambda_open / (1.0 - lambda_open));
  y[3] = std::log(lambda_close / (1.0 - lambda_close));
  return y;
}

OhlcBar from_feature(const FeatureVec& fv) {
  for (std::size_t d = 0; d < kChannels; ++d) {
    if (!std::isfinite(fv[d])) {
      throw Error(Errc::NonFinite, "feature component " + std::to_string(d + 1) +
                                       " is not finite");
    }
  }
  const double low = std::exp(fv[0]);
  const double range = std::exp(fv[1]);
  double high = low + range;
  if (!std::isfinite(high) || low <= 0.0 || range <= 0.0) {
    throw Error(Errc::NonFinite, "exp over/underflow while rebuilding the bar");
  }
  // The true high exceeds low by construction; round up when the range falls
  // below one ulp so the strict ordering survives in doubles.
  if (high == low) {
    high = std::nextafter(low, std::numeric_limits<double>::infinity());
  }

  const double lambda_open = logistic(fv[2]);
  const double lambda_close = logistic(fv[3]);
  double open = (1.0 - lambda_open) * low + lambda_open * high;
  double close = (1.0 - lambda_close) * low + lambda_close * high;
  if (open <= low) open = std::nextafter(low, high);
  if (open >= high) open = std::nextafter(high, low);
  if (close <= low) close = std::nextafter(low, high);
  if (close >= high) close = std::nextafter(high, low);

  const OhlcBar bar{open, high, low, close};
  if (!(bar.low > 0.0 && bar.low < bar.high && bar.open > bar.low &&
        bar.open < bar.high && bar.close > bar.low && bar.close < bar.high)) {
    throw Error(Errc::NonFinite,
                "feature vector maps outside the representable strict bar domain");
  }
  return bar;
}

std::vector<FeatureVec> transform_bars(std::span<const OhlcBar> bars) {
  std::vector<FeatureVec> out(bars.size());
  std::atomic<bool> failed{false};
  Error first_error(Errc::NonFinite, "");
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(bars.size()); ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      out[i] = to_feature(bars[i]);
    } catch (const Error& e) {
#pragma omp critical(ohlc_transform_err)
      {
        if (!failed.exchange(true)) first_error = e;
      }
    }
  }
  if (failed.load()) throw first_error;
  return out;
}

std::vector<OhlcBar> inverse_bars(std::span<const FeatureVec> features) {
  std::vector<OhlcBar> out(features.size());
  std::atomic<bool> failed{false};
  Error first_error(Errc::NonFinite, "");
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(features.size()); ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      out[i] = from_feature(features[i]);
    } catch (const Error& e) {
#pragma omp critical(ohlc_inverse_err)
      {
        if (!failed.exchange(true)) first_error = e;
      }
    }
  }
  if (failed.load()) throw first_error;
  return out;
}

}  // namespace ohlc
