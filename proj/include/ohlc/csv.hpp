#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ohlc/feature_space.hpp"
#include "ohlc/ohlc_core.hpp"
#include "ohlc/ppca.hpp"
#include "ohlc/simulate.hpp"

namespace ohlc {

// Long-format records: one (entity, variable) cell per row.
struct OhlcRecord {
  std::string entity;
  std::string variable;
  OhlcBar bar;
  std::size_t line = 0;  // source line, for diagnostics
};

struct FeatureRecord {
  std::string entity;
  std::string variable;
  FeatureVec y;
  std::size_t line = 0;
};

struct OhlcTable {
  std::vector<OhlcRecord> records;
};

struct FeatureTable {
  std::vector<FeatureRecord> records;
};

// Rectangular bar grid pivoted from a long table; rows/columns follow first
// appearance in the file.
struct OhlcGrid {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<OhlcBar> bars;  // row-major

  const OhlcBar& at(std::size_t i, std::size_t j) const {
    return bars[i * col_labels.size() + j];
  }
  OhlcBar& at(std::size_t i, std::size_t j) {
    return bars[i * col_labels.size() + j];
  }
};

// Headers are fixed: entity,variable,open,high,low,close and
// entity,variable,y1,y2,y3,y4. Plain quoting with "" escapes is accepted.
// Throws MissingHeader, BadNumeric, DuplicateKey.
OhlcTable parse_ohlc_csv(const std::string& path);
FeatureTable parse_feature_csv(const std::string& path);

// Throws RaggedPivot when an entity is missing a variable.
OhlcGrid pivot(const OhlcTable& table);
FeatureMatrix pivot(const FeatureTable& table);

void write_ohlc_csv(const OhlcTable& table, const std::string& path);
void write_feature_csv(const FeatureTable& table, const std::string& path);

// Six significant digits, used for model/report files and chart labels where
// stable golden bytes matter.
std::string format_number(double v);

// Shortest representation that parses back to the identical double; used for
// data tables so transform/inverse roundtrips survive the file boundary.
std::string format_exact(double v);

// Writes eigenvalues.csv, loadings.csv and scores_ohlc.csv under outdir.
void write_model(const PseudoPcModel& model, const OhlcScoreGrid& scores_ohlc,
                 const std::string& outdir);

// Study report rows: sample_size, pc_index (1..p or "mean"), mape_mean_pct,
// mape_sd, q4_mean.
void write_sim_reports(std::span<const SimReport> reports, const std::string& path);

// Parse-back of emitted model files, for the plot subcommands.
struct EigenRow {
  int component = 0;
  double eigenvalue = 0.0;
  double vcr = 0.0;
  double cvcr = 0.0;
};
std::vector<EigenRow> parse_eigenvalues_csv(const std::string& path);

struct ScoreOhlcRow {
  std::string entity;
  int component = 0;
  OhlcBar bar;
};
std::vector<ScoreOhlcRow> parse_scores_csv(const std::string& path);

// abbreviation,market rows (market names may be quoted).
std::vector<std::pair<std::string, std::string>> parse_abbreviations_csv(
    const std::string& path);

}  // namespace ohlc
