#include <CLI11.hpp>

#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "ohlc/csv.hpp"
#include "ohlc/ohlc_core.hpp"
#include "ohlc/ppca.hpp"
#include "ohlc/simulate.hpp"
#include "ohlc/svg.hpp"

namespace {

using namespace ohlc;

struct PreprocessFlags {
  double epsilon = 0.01;
  std::string flat_policy = "limit-up";
  std::int64_t jitter_seed = -1;

  PreprocessConfig to_config() const {
    PreprocessConfig cfg;
    cfg.epsilon = epsilon;
    cfg.flat_policy =
        flat_policy == "limit-down" ? FlatPolicy::LimitDown : FlatPolicy::LimitUp;
    if (jitter_seed >= 0) cfg.jitter_seed = static_cast<std::uint64_t>(jitter_seed);
    return cfg;
  }
};

void add_preprocess_flags(CLI::App* cmd, PreprocessFlags& flags) {
  cmd->add_option("--epsilon", flags.epsilon,
                  "lambda replacement for boundary bars, in (0, 0.5)")
      ->check(CLI::Range(1e-9, 0.4999));
  cmd->add_option("--flat-policy", flags.flat_policy,
                  "direction assumed for all-equal bars")
      ->check(CLI::IsMember({"limit-up", "limit-down"}));
  cmd->add_option("--jitter-seed", flags.jitter_seed,
                  "seed for randomized nudges in (epsilon/2, epsilon)")
      ->check(CLI::NonNegativeNumber);
}

// Preprocess a long-format table; dropped all-zero bars are reported on
// stderr and omitted from the result.
FeatureTable transform_table(const OhlcTable& raw, const PreprocessConfig& cfg,
                             std::set<std::string>* dropped_entities) {
  NudgeSource nudges(cfg);
  FeatureTable out;
  for (const auto& rec : raw.records) {
    const auto bar = preprocess(rec.bar, cfg, nudges);
    if (!bar) {
      std::cerr << "note: dropping all-zero bar (" << rec.entity << ", "
                << rec.variable << ") at row " << rec.line << "\n";
      if (dropped_entities) dropped_entities->insert(rec.entity);
      continue;
    }
    out.records.push_back({rec.entity, rec.variable, to_feature(*bar), rec.line});
  }
  return out;
}

int run_transform(const std::string& input, const std::string& output,
                  const PreprocessFlags& flags) {
  const OhlcTable raw = parse_ohlc_csv(input);
  const FeatureTable features = transform_table(raw, flags.to_config(), nullptr);
  write_feature_csv(features, output);
  return 0;
}

int run_inverse(const std::string& input, const std::string& output) {
  const FeatureTable features = parse_feature_csv(input);
  std::vector<FeatureVec> cells;
  cells.reserve(features.records.size());
  for (const auto& rec : features.records) cells.push_back(rec.y);
  const std::vector<OhlcBar> bars = inverse_bars(cells);
  OhlcTable out;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    out.records.push_back({features.records[i].entity, features.records[i].variable,
                           bars[i], features.records[i].line});
  }
  write_ohlc_csv(out, output);
  return 0;
}

int run_ppca(const std::string& input, const std::string& kind,
             std::size_t components, const std::string& outdir,
             const PreprocessFlags& flags) {
  FeatureTable features;
  if (kind == "raw") {
    const OhlcTable raw = parse_ohlc_csv(input);
    std::set<std::string> dropped;
    features = transform_table(raw, flags.to_config(), &dropped);
    if (!dropped.empty()) {
      // Keep the pivot rectangular: an entity that lost a cell is removed.
      FeatureTable kept;
      for (auto& rec : features.records) {
        if (!dropped.count(rec.entity)) kept.records.push_back(std::move(rec));
      }
      for (const auto& e : dropped) {
        std::cerr << "note: dropping entity '" << e << "' (all-zero bar)\n";
      }
      features = std::move(kept);
    }
  } else {
    // "features" and "standardized" parse identically; the fit standardizes
    // internally either way (already-standardized input makes it a no-op).
    features = parse_feature_csv(input);
  }

  const FeatureMatrix m = pivot(features);
  const PseudoPcModel model = fit(m, components);
  const ScoreMatrix score_matrix = scores(model, m);
  const OhlcScoreGrid grid = scores_to_ohlc(score_matrix);

  write_model(model, grid, outdir);

  ChartSpec scree_spec;
  scree_spec.title = "Cumulative variance contribution";
  scree_spec.x_label = "component";
  scree_spec.y_label = "contribution rate";
  write_text_file(outdir + "/scree.svg", render_scree_svg(model.eigenvalues, scree_spec));

  for (std::size_t h = 0; h < grid.components; ++h) {
    std::vector<OhlcBar> bars(grid.row_labels.size());
    for (std::size_t i = 0; i < bars.size(); ++i) bars[i] = grid.at(i, h);
    ChartSpec candle_spec;
    candle_spec.title = "PC" + std::to_string(h + 1) + " scores, OHLC form";
    candle_spec.y_label = "score price";
    write_text_file(outdir + "/scores_pc" + std::to_string(h + 1) + ".svg",
                    render_candlestick_svg(grid.row_labels, bars, candle_spec));
  }
  return 0;
}

int run_simulate(const std::vector<std::size_t>& sizes, std::size_t repeats,
                 std::uint64_t seed, const std::string& output) {
  std::vector<SimReport> reports;
  reports.reserve(sizes.size());
  for (std::size_t n : sizes) {
    reports.push_back(run_study({n, repeats, seed, 4}));
  }
  write_sim_reports(reports, output);

  std::string svg_path = output;
  const auto dot = svg_path.find_last_of('.');
  if (dot != std::string::npos) svg_path.erase(dot);
  svg_path += ".svg";
  ChartSpec spec;
  spec.title = "Cumulative variance contribution, n=" +
               std::to_string(reports.back().config.n);
  spec.x_label = "component";
  spec.y_label = "contribution rate";
  write_text_file(svg_path,
                  render_scree_svg(reports.back().mean_eigenvalues, spec));
  return 0;
}

int run_plot_scree(const std::string& model_path, const std::string& output) {
  const auto rows = parse_eigenvalues_csv(model_path);
  std::vector<double> eigenvalues;
  eigenvalues.reserve(rows.size());
  for (const auto& r : rows) eigenvalues.push_back(r.eigenvalue);
  ChartSpec spec;
  spec.title = "Cumulative variance contribution";
  spec.x_label = "component";
  spec.y_label = "contribution rate";
  write_text_file(output, render_scree_svg(eigenvalues, spec));
  return 0;
}

int run_plot_candles(const std::string& scores_path, int component,
                     const std::string& output) {
  const auto rows = parse_scores_csv(scores_path);
  std::vector<std::string> labels;
  std::vector<OhlcBar> bars;
  for (const auto& r : rows) {
    if (r.component == component) {
      labels.push_back(r.entity);
      bars.push_back(r.bar);
    }
  }
  if (bars.empty()) {
    throw Error(Errc::EmptyInput, "no rows for component " + std::to_string(component) +
                                      " in '" + scores_path + "'");
  }
  ChartSpec spec;
  spec.title = "PC" + std::to_string(component) + " scores, OHLC form";
  spec.y_label = "score price";
  write_text_file(output, render_candlestick_svg(labels, bars, spec));
  return 0;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',') {
      if (cur.empty()) continue;
      sizes.push_back(static_cast<std::size_t>(std::stoull(cur)));
      cur.clear();
    } else if (c >= '0' && c <= '9') {
      cur.push_back(c);
    } else {
      throw CLI::ValidationError("--n", "expected comma-separated sample sizes");
    }
  }
  if (sizes.empty()) throw CLI::ValidationError("--n", "needs at least one size");
  for (std::size_t n : sizes) {
    if (n < 5) throw CLI::ValidationError("--n", "sample sizes must be >= 5");
  }
  return sizes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constraint-free feature transform, component model and charts for OHLC data"};
  app.require_subcommand(1);
  int rc = 0;

  // transform
  auto* transform = app.add_subcommand("transform", "OHLC table -> feature table");
  std::string t_input, t_output;
  PreprocessFlags t_flags;
  transform->add_option("--input", t_input, "raw OHLC CSV")->required();
  transform->add_option("--output", t_output, "feature CSV to write")->required();
  add_preprocess_flags(transform, t_flags);
  transform->callback([&] { rc = run_transform(t_input, t_output, t_flags); });

  // inverse
  auto* inverse = app.add_subcommand("inverse", "feature table -> OHLC table");
  std::string i_input, i_output;
  inverse->add_option("--input", i_input, "feature CSV")->required();
  inverse->add_option("--output", i_output, "OHLC CSV to write")->required();
  inverse->callback([&] { rc = run_inverse(i_input, i_output); });

  // ppca
  auto* ppca = app.add_subcommand(
      "ppca", "full pipeline: preprocess, transform, fit, scores, charts");
  std::string p_input, p_kind = "features", p_outdir;
  std::size_t p_components = 2;
  PreprocessFlags p_flags;
  ppca->add_option("--input", p_input, "input CSV")->required();
  ppca->add_option("--input-kind", p_kind, "raw | features | standardized")
      ->check(CLI::IsMember({"raw", "features", "standardized"}));
  ppca->add_option("--components", p_components, "components to keep")
      ->check(CLI::PositiveNumber);
  ppca->add_option("--outdir", p_outdir, "output directory")->required();
  add_preprocess_flags(ppca, p_flags);
  ppca->callback(
      [&] { rc = run_ppca(p_input, p_kind, p_components, p_outdir, p_flags); });

  // simulate
  auto* simulate = app.add_subcommand("simulate", "redundancy recovery study");
  std::string s_sizes = "50,100,150,200";
  std::size_t s_repeats = 300;
  std::uint64_t s_seed = 0;
  std::string s_output;
  simulate->add_option("--n", s_sizes, "sample size or comma-separated list");
  simulate->add_option("--repeats", s_repeats, "repeats per sample size")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", s_seed, "base seed (repeat r uses seed + r)");
  simulate->add_option("--output", s_output, "report CSV (chart lands next to it)")
      ->required();
  simulate->callback(
      [&] { rc = run_simulate(parse_size_list(s_sizes), s_repeats, s_seed, s_output); });

  // plot
  auto* plot = app.add_subcommand("plot", "re-render charts from emitted files");
  plot->require_subcommand(1);
  auto* scree = plot->add_subcommand("scree", "contribution chart from eigenvalues.csv");
  std::string sc_model, sc_output;
  scree->add_option("--model", sc_model, "eigenvalues.csv")->required();
  scree->add_option("--output", sc_output, "SVG to write")->required();
  scree->callback([&] { rc = run_plot_scree(sc_model, sc_output); });

  auto* candles = plot->add_subcommand("candles", "candlestick chart from scores_ohlc.csv");
  std::string ca_scores, ca_output;
  int ca_component = 1;
  candles->add_option("--scores", ca_scores, "scores_ohlc.csv")->required();
  candles->add_option("--component", ca_component, "component index (1-based)")
      ->check(CLI::PositiveNumber);
  candles->add_option("--output", ca_output, "SVG to write")->required();
  candles->callback([&] { rc = run_plot_candles(ca_scores, ca_component, ca_output); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ohlc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
