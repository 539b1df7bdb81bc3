#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "ohlc/csv.hpp"

using namespace ohlc;

namespace {

const std::string kCli = OHLC_CLI_PATH;
const std::string kDataDir = OHLC_DATA_DIR;

int run(const std::string& args) {
  const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

std::string out_path(const std::string& name) {
  std::filesystem::create_directories("cli_test_tmp");
  return "cli_test_tmp/" + name;
}

}  // namespace

TEST_CASE("usage errors exit 1, data errors exit 2, success exits 0") {
  CHECK(run("no-such-command") == 1);
  CHECK(run("transform --input only") == 1);
  CHECK(run("--help") == 0);
  CHECK(run("transform --input " + out_path("missing.csv") + " --output " +
            out_path("x.csv")) == 2);
  const std::string bad = out_path("bad.csv");
  {
    std::ofstream f(bad);
    f << "entity,variable,open,high,low,close\nA,x,oops,2,1,1.5\n";
  }
  CHECK(run("transform --input " + bad + " --output " + out_path("x.csv")) == 2);
}

TEST_CASE("transform then inverse roundtrips the raw fixture") {
  const std::string feat = out_path("features.csv");
  const std::string back = out_path("back.csv");
  REQUIRE(run("transform --input " + kDataDir + "/raw_ohlc.csv --output " + feat) == 0);
  REQUIRE(run("inverse --input " + feat + " --output " + back) == 0);

  const OhlcTable original = parse_ohlc_csv(kDataDir + "/raw_ohlc.csv");
  const OhlcTable restored = parse_ohlc_csv(back);
  REQUIRE(restored.records.size() == original.records.size());
  std::size_t untouched = 0;
  for (std::size_t i = 0; i < original.records.size(); ++i) {
    const OhlcBar& a = original.records[i].bar;
    const OhlcBar& b = restored.records[i].bar;
    CHECK(original.records[i].entity == restored.records[i].entity);
    // Bars the preprocessing never touched come back within 1e-9 relative.
    const auto near = [](double x, double y) {
      return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(y));
    };
    if (near(b.open, a.open) && near(b.high, a.high) && near(b.low, a.low) &&
        near(b.close, a.close)) {
      ++untouched;
    } else {
      // Adjusted bars still share the untouched low.
      CHECK(near(b.low, a.low));
    }
  }
  CHECK(untouched == 95);  // 120 records minus the 25 boundary/flat bars
}

TEST_CASE("ppca subcommand emits model files and charts") {
  const std::string outdir = out_path("fit");
  REQUIRE(run("ppca --input " + kDataDir +
              "/features_std.csv --input-kind standardized --components 2 --outdir " +
              outdir) == 0);
  for (const char* name : {"eigenvalues.csv", "loadings.csv", "scores_ohlc.csv",
                           "scree.svg", "scores_pc1.svg", "scores_pc2.svg"}) {
    CHECK(std::filesystem::exists(outdir + "/" + std::string(name)));
  }
  const auto eig = parse_eigenvalues_csv(outdir + "/eigenvalues.csv");
  REQUIRE(eig.size() == 6);
  CHECK(std::abs(eig[0].eigenvalue - 2.065) < 0.05);

  // The raw path runs preprocess + transform first and lands on nearby values.
  const std::string rawdir = out_path("fit_raw");
  REQUIRE(run("ppca --input " + kDataDir +
              "/raw_ohlc.csv --input-kind raw --components 2 --outdir " + rawdir) == 0);
  const auto eig_raw = parse_eigenvalues_csv(rawdir + "/eigenvalues.csv");
  REQUIRE(eig_raw.size() == 6);
  CHECK(std::abs(eig_raw[0].eigenvalue - 2.065) < 0.35);
}

TEST_CASE("simulate and plot subcommands") {
  const std::string report = out_path("report.csv");
  REQUIRE(run("simulate --n 50 --repeats 3 --seed 1 --output " + report) == 0);
  CHECK(std::filesystem::exists(report));
  CHECK(std::filesystem::exists(out_path("report.svg")));

  const std::string outdir = out_path("fit");
  const std::string scree = out_path("replot_scree.svg");
  const std::string candles = out_path("replot_candles.svg");
  CHECK(run("plot scree --model " + outdir + "/eigenvalues.csv --output " + scree) == 0);
  CHECK(run("plot candles --scores " + outdir + "/scores_ohlc.csv --component 1 "
            "--output " + candles) == 0);
  CHECK(std::filesystem::exists(scree));
  CHECK(std::filesystem::exists(candles));
  // Out-of-range component is a data error.
  CHECK(run("plot candles --scores " + outdir + "/scores_ohlc.csv --component 9 "
            "--output " + candles) == 2);
}
