#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ohlc/error.hpp"

namespace ohlc {

inline constexpr std::size_t kChannels = 4;

// One candlestick: open/high/low/close prices in the same currency unit.
// A bar is valid when low > 0, low < high, and open/close lie in [low, high].
struct OhlcBar {
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;

  friend bool operator==(const OhlcBar&, const OhlcBar&) = default;
};

// Position of open/close inside [low, high] as a fraction of the range.
// A value above 0.5 means the price sits nearer the high.
struct ConvexCoeffs {
  double lambda_open = 0.0;
  double lambda_close = 0.0;
};

// Unconstrained 4-vector equivalent of a bar:
//   [0] log low, [1] log range, [2] open logit, [3] close logit.
// Score cells produced by the component model reuse the same layout.
struct FeatureVec {
  std::array<double, kChannels> ch{};

  double& operator[](std::size_t d) { return ch[d]; }
  double operator[](std::size_t d) const { return ch[d]; }

  friend bool operator==(const FeatureVec&, const FeatureVec&) = default;
};

FeatureVec operator+(const FeatureVec& a, const FeatureVec& b);
FeatureVec operator-(const FeatureVec& a, const FeatureVec& b);
FeatureVec operator*(double beta, const FeatureVec& a);

// Direction of the price cap that produced an all-equal bar.
enum class FlatPolicy { LimitUp, LimitDown };

struct PreprocessConfig {
  double epsilon = 0.01;  // lambda replacement for boundary bars, in (0, 0.5)
  FlatPolicy flat_policy = FlatPolicy::LimitUp;
  // When set, boundary nudges are drawn uniformly from (epsilon/2, epsilon)
  // with this seed instead of being the fixed epsilon.
  std::optional<std::uint64_t> jitter_seed;
};

// Produces the lambda nudge values used by preprocess. With no jitter seed
// every call yields the fixed epsilon; with one, a seeded uniform draw from
// (epsilon/2, epsilon). Share one instance across a whole table so jittered
// bars get distinct nudges.
class NudgeSource {
 public:
  explicit NudgeSource(const PreprocessConfig& config);

  double next();

 private:
  double epsilon_;
  bool jitter_ = false;
  std::mt19937_64 rng_;
};

// Returns the bar unchanged iff all validity constraints hold; otherwise
// throws NonPositiveLow, DegenerateRange, or OutOfRangeOpenClose.
OhlcBar validate_ohlc(const OhlcBar& bar);

// Lambda coefficients of a bar with positive range.
ConvexCoeffs convex_coeffs(const OhlcBar& bar);

// Regularizes a relaxed bar so the transform below is defined:
//   all-zero bar        -> nullopt (dropped)
//   all-equal bar       -> widened per flat_policy (x1.1 on high + close/open)
//   lambda at 0 (or 1)  -> replaced by a nudge (or 1 - nudge), price rebuilt
// Output satisfies the validity constraints with lambdas strictly in (0,1).
// Throws NegativePrice or InconsistentBounds on inputs outside its domain.
std::optional<OhlcBar> preprocess(const OhlcBar& raw,
                                  const PreprocessConfig& config,
                                  NudgeSource& nudges);
std::optional<OhlcBar> preprocess(const OhlcBar& raw,
                                  const PreprocessConfig& config = {});

// Bar -> feature 4-vector. Requires a valid bar with lambdas off {0,1};
// throws DegenerateLambda when a boundary bar reaches it un-preprocessed.
FeatureVec to_feature(const OhlcBar& bar);

// Feature 4-vector -> bar; exact inverse of to_feature in real arithmetic.
// Throws NonFinite on non-finite input or when exp over/underflow leaves
// the strict bar domain unrepresentable.
OhlcBar from_feature(const FeatureVec& fv);

// Batch kernels (OpenMP over elements, order preserved).
std::vector<FeatureVec> transform_bars(std::span<const OhlcBar> bars);
std::vector<OhlcBar> inverse_bars(std::span<const FeatureVec> features);

}  // namespace ohlc
