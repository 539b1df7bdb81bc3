// Times the OpenMP kernels against their serial reference implementations on
// synthetic data and checks the outputs stay bit-identical.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "ohlc/feature_space.hpp"
#include "ohlc/ohlc_core.hpp"
#include "ohlc/ppca.hpp"
#include "ohlc/reference.hpp"
#include "ohlc/rng.hpp"
#include "ohlc/simulate.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace ohlc;
using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& fn, int runs = 3) {
  double best = 1e300;
  for (int r = 0; r < runs; ++r) {
    const auto t0 = Clock::now();
    fn();
    const auto t1 = Clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const std::string& name, double serial_ms, double parallel_ms, bool equal) {
  std::printf("%-28s %10.2f ms %10.2f ms   x%-5.2f %s\n", name.c_str(), serial_ms,
              parallel_ms, serial_ms / parallel_ms, equal ? "identical" : "DIFFER");
}

std::vector<OhlcBar> synthetic_bars(std::size_t count) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> log_low(-2.0, 4.0);
  std::uniform_real_distribution<double> log_ratio(-4.0, 1.0);
  std::uniform_real_distribution<double> lambda(0.02, 0.98);
  std::vector<OhlcBar> bars(count);
  for (auto& b : bars) {
    const double low = std::exp(log_low(rng));
    const double range = low * std::exp(log_ratio(rng));
    b.low = low;
    b.high = low + range;
    b.open = low + lambda(rng) * range;
    b.close = low + lambda(rng) * range;
  }
  return bars;
}

FeatureMatrix synthetic_matrix(std::size_t n, std::size_t p) {
  std::vector<std::string> rows(n), cols(p);
  for (std::size_t i = 0; i < n; ++i) rows[i] = "r" + std::to_string(i);
  for (std::size_t j = 0; j < p; ++j) cols[j] = "c" + std::to_string(j);
  FeatureMatrix m(rows, cols);
  NormalSampler sampler(17);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < kChannels; ++d) m.at(i, j)[d] = sampler.next();
    }
  }
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--quick") quick = true;
  }
  const std::size_t bar_count = quick ? 100'000 : 1'000'000;
  const std::size_t n = quick ? 1'000 : 4'000;
  const std::size_t p = 48;
  const std::size_t repeats = quick ? 20 : 100;

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP\n");
#endif
  std::printf("%-28s %13s %13s   %-6s %s\n", "kernel", "serial", "parallel", "speedup",
              "outputs");

  {
    const auto bars = synthetic_bars(bar_count);
    std::vector<FeatureVec> out_s, out_p;
    const double ts = time_ms([&] { out_s = reference::transform_bars(bars); });
    const double tp = time_ms([&] { out_p = transform_bars(bars); });
    report("transform_bars (" + std::to_string(bar_count) + ")", ts, tp, out_s == out_p);

    std::vector<OhlcBar> inv_s, inv_p;
    const double is = time_ms([&] { inv_s = reference::inverse_bars(out_s); });
    const double ip = time_ms([&] { inv_p = inverse_bars(out_s); });
    report("inverse_bars", is, ip, inv_s == inv_p);
  }

  {
    const auto m = synthetic_matrix(n, p);
    CorrelationMatrices c_s, c_p;
    const double ts = time_ms([&] { c_s = reference::corr_matrix(m); });
    const double tp = time_ms([&] { c_p = corr_matrix(m); });
    report("corr_matrix (" + std::to_string(n) + "x" + std::to_string(p) + ")", ts, tp,
           c_s.corr == c_p.corr && c_s.cov == c_p.cov);

    std::pair<FeatureMatrix, SummaryStats> s_s, s_p;
    const double ss = time_ms([&] { s_s = reference::standardize(m); });
    const double sp = time_ms([&] { s_p = standardize(m); });
    report("standardize", ss, sp, s_s.first == s_p.first);

    const PseudoPcModel model = fit(m, p);
    ScoreMatrix sc_s, sc_p;
    const double cs = time_ms([&] { sc_s = reference::scores(model, m); });
    const double cp = time_ms([&] { sc_p = scores(model, m); });
    report("scores (m=" + std::to_string(p) + ")", cs, cp, sc_s == sc_p);
  }

  {
    const SimConfig config{150, repeats, 5, 4};
    SimReport r_s, r_p;
    const double ts = time_ms([&] { r_s = reference::run_study(config); }, 1);
    const double tp = time_ms([&] { r_p = run_study(config); }, 1);
    const bool equal = r_s.mape_mean_pct == r_p.mape_mean_pct &&
                       r_s.mape_sd == r_p.mape_sd &&
                       r_s.mean_eigenvalues == r_p.mean_eigenvalues &&
                       r_s.zero_eigen_counts == r_p.zero_eigen_counts &&
                       r_s.q_mean == r_p.q_mean;
    report("run_study (" + std::to_string(repeats) + " repeats)", ts, tp, equal);
  }
  return 0;
}
