#include "ohlc/csv.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ohlc {

namespace {

struct CsvRow {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

// Comma-separated fields with optional double-quote quoting ("" escapes a
// quote). Quotes do not span lines.
std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::vector<CsvRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw Error(Errc::IoError, "cannot open '" + path + "'");
  }
  std::vector<CsvRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.size() >= 3 &&
        static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB &&
        static_cast<unsigned char>(line[2]) == 0xBF) {
      line.erase(0, 3);
    }
    if (line.empty()) continue;
    rows.push_back({split_fields(line), line_no});
  }
  return rows;
}

void check_header(const std::vector<CsvRow>& rows,
                  const std::vector<std::string>& expected, const std::string& path) {
  if (rows.empty() || rows.front().fields != expected) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) want += ',';
      want += expected[i];
    }
    throw Error(Errc::MissingHeader, "'" + path + "' must start with header " + want);
  }
}

double parse_double(const std::string& text, std::size_t line, const std::string& column) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || text.empty()) {
    throw Error(Errc::BadNumeric, "row " + std::to_string(line) + ", column " +
                                      column + ": '" + text + "'");
  }
  return v;
}

void check_field_count(const CsvRow& row, std::size_t expected) {
  if (row.fields.size() != expected) {
    throw Error(Errc::BadNumeric,
                "row " + std::to_string(row.line) + ": expected " +
                    std::to_string(expected) + " fields, got " +
                    std::to_string(row.fields.size()));
  }
}

std::string quote_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out.is_open()) {
    throw Error(Errc::IoError, "cannot write '" + path + "'");
  }
  return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(Errc::IoError, "write failed for '" + path + "'");
}

}  // namespace

OhlcTable parse_ohlc_csv(const std::string& path) {
  const auto rows = read_csv(path);
  check_header(rows, {"entity", "variable", "open", "high", "low", "close"}, path);
  OhlcTable table;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    check_field_count(row, 6);
    OhlcRecord rec;
    rec.entity = row.fields[0];
    rec.variable = row.fields[1];
    rec.bar.open = parse_double(row.fields[2], row.line, "open");
    rec.bar.high = parse_double(row.fields[3], row.line, "high");
    rec.bar.low = parse_double(row.fields[4], row.line, "low");
    rec.bar.close = parse_double(row.fields[5], row.line, "close");
    rec.line = row.line;
    if (!seen.insert({rec.entity, rec.variable}).second) {
      throw Error(Errc::DuplicateKey,
                  "(" + rec.entity + ", " + rec.variable + ") appears twice");
    }
    table.records.push_back(std::move(rec));
  }
  return table;
}

FeatureTable parse_feature_csv(const std::string& path) {
  const auto rows = read_csv(path);
  check_header(rows, {"entity", "variable", "y1", "y2", "y3", "y4"}, path);
  FeatureTable table;
  std::set<std::pair<std::string, std::string>> seen;
  const char* cols[kChannels] = {"y1", "y2", "y3", "y4"};
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    check_field_count(row, 6);
    FeatureRecord rec;
    rec.entity = row.fields[0];
    rec.variable = row.fields[1];
    for (std::size_t d = 0; d < kChannels; ++d) {
      rec.y[d] = parse_double(row.fields[2 + d], row.line, cols[d]);
    }
    rec.line = row.line;
    if (!seen.insert({rec.entity, rec.variable}).second) {
      throw Error(Errc::DuplicateKey,
                  "(" + rec.entity + ", " + rec.variable + ") appears twice");
    }
    table.records.push_back(std::move(rec));
  }
  return table;
}

namespace {

// First-appearance orders plus completeness check shared by both pivots.
template <typename Record>
std::pair<std::vector<std::string>, std::vector<std::string>> pivot_axes(
    const std::vector<Record>& records) {
  std::vector<std::string> row_labels, col_labels;
  std::map<std::string, std::size_t> row_index, col_index;
  for (const auto& rec : records) {
    if (row_index.emplace(rec.entity, row_labels.size()).second) {
      row_labels.push_back(rec.entity);
    }
    if (col_index.emplace(rec.variable, col_labels.size()).second) {
      col_labels.push_back(rec.variable);
    }
  }
  for (const auto& row : row_labels) {
    for (const auto& col : col_labels) {
      bool found = false;
      for (const auto& rec : records) {
        if (rec.entity == row && rec.variable == col) {
          found = true;
          break;
        }
      }
      if (!found) {
        throw Error(Errc::RaggedPivot,
                    "entity '" + row + "' is missing variable '" + col + "'");
      }
    }
  }
  return {std::move(row_labels), std::move(col_labels)};
}

}  // namespace

OhlcGrid pivot(const OhlcTable& table) {
  if (table.records.empty()) {
    throw Error(Errc::EmptyInput, "no records to pivot");
  }
  auto [row_labels, col_labels] = pivot_axes(table.records);
  OhlcGrid grid;
  grid.row_labels = row_labels;
  grid.col_labels = col_labels;
  grid.bars.resize(row_labels.size() * col_labels.size());
  std::map<std::string, std::size_t> row_index, col_index;
  for (std::size_t i = 0; i < row_labels.size(); ++i) row_index[row_labels[i]] = i;
  for (std::size_t j = 0; j < col_labels.size(); ++j) col_index[col_labels[j]] = j;
  for (const auto& rec : table.records) {
    grid.at(row_index[rec.entity], col_index[rec.variable]) = rec.bar;
  }
  return grid;
}

FeatureMatrix pivot(const FeatureTable& table) {
  if (table.records.empty()) {
    throw Error(Errc::EmptyInput, "no records to pivot");
  }
  auto [row_labels, col_labels] = pivot_axes(table.records);
  FeatureMatrix m(row_labels, col_labels);
  std::map<std::string, std::size_t> row_index, col_index;
  for (std::size_t i = 0; i < row_labels.size(); ++i) row_index[row_labels[i]] = i;
  for (std::size_t j = 0; j < col_labels.size(); ++j) col_index[col_labels[j]] = j;
  for (const auto& rec : table.records) {
    m.at(row_index[rec.entity], col_index[rec.variable]) = rec.y;
  }
  return m;
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // fold away negative zero
  char buf[48];
  std::snprintf(buf, sizeof buf, "%#.6g", v);
  std::string s = buf;
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::string format_exact(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_ohlc_csv(const OhlcTable& table, const std::string& path) {
  auto out = open_out(path);
  out << "entity,variable,open,high,low,close\n";
  for (const auto& rec : table.records) {
    out << quote_field(rec.entity) << ',' << quote_field(rec.variable) << ','
        << format_exact(rec.bar.open) << ',' << format_exact(rec.bar.high) << ','
        << format_exact(rec.bar.low) << ',' << format_exact(rec.bar.close) << '\n';
  }
  finish_out(out, path);
}

void write_feature_csv(const FeatureTable& table, const std::string& path) {
  auto out = open_out(path);
  out << "entity,variable,y1,y2,y3,y4\n";
  for (const auto& rec : table.records) {
    out << quote_field(rec.entity) << ',' << quote_field(rec.variable);
    for (std::size_t d = 0; d < kChannels; ++d) out << ',' << format_exact(rec.y[d]);
    out << '\n';
  }
  finish_out(out, path);
}

void write_model(const PseudoPcModel& model, const OhlcScoreGrid& scores_ohlc,
                 const std::string& outdir) {
  std::filesystem::create_directories(outdir);
  const std::string eig_path = outdir + "/eigenvalues.csv";
  {
    auto out = open_out(eig_path);
    out << "component,eigenvalue,vcr,cvcr\n";
    for (std::size_t h = 0; h < model.eigenvalues.size(); ++h) {
      out << (h + 1) << ',' << format_number(model.eigenvalues[h]) << ','
          << format_number(model.variance_contribution[h]) << ','
          << format_number(model.cumulative_contribution[h]) << '\n';
    }
    finish_out(out, eig_path);
  }

  const std::string load_path = outdir + "/loadings.csv";
  {
    auto out = open_out(load_path);
    out << "variable";
    for (std::size_t h = 0; h < model.component_count; ++h) out << ",pc" << (h + 1);
    out << '\n';
    for (std::size_t j = 0; j < model.variable_labels.size(); ++j) {
      out << quote_field(model.variable_labels[j]);
      for (std::size_t h = 0; h < model.component_count; ++h) {
        out << ',' << format_number(model.loadings(j, h));
      }
      out << '\n';
    }
    finish_out(out, load_path);
  }

  const std::string score_path = outdir + "/scores_ohlc.csv";
  {
    auto out = open_out(score_path);
    out << "entity,component,open,high,low,close\n";
    for (std::size_t i = 0; i < scores_ohlc.row_labels.size(); ++i) {
      for (std::size_t h = 0; h < scores_ohlc.components; ++h) {
        const OhlcBar& b = scores_ohlc.at(i, h);
        out << quote_field(scores_ohlc.row_labels[i]) << ',' << (h + 1) << ','
            << format_number(b.open) << ',' << format_number(b.high) << ','
            << format_number(b.low) << ',' << format_number(b.close) << '\n';
      }
    }
    finish_out(out, score_path);
  }
}

void write_sim_reports(std::span<const SimReport> reports, const std::string& path) {
  auto out = open_out(path);
  out << "sample_size,pc_index,mape_mean_pct,mape_sd,q4_mean\n";
  for (const SimReport& rep : reports) {
    for (std::size_t h = 0; h < rep.mape_mean_pct.size(); ++h) {
      out << rep.config.n << ',' << (h + 1) << ','
          << format_number(rep.mape_mean_pct[h]) << ','
          << format_number(rep.mape_sd[h]) << ',' << format_number(rep.q_mean) << '\n';
    }
    out << rep.config.n << ",mean," << format_number(rep.overall_mape_mean_pct)
        << ',' << format_number(rep.overall_mape_sd) << ','
        << format_number(rep.q_mean) << '\n';
  }
  finish_out(out, path);
}

std::vector<EigenRow> parse_eigenvalues_csv(const std::string& path) {
  const auto rows = read_csv(path);
  check_header(rows, {"component", "eigenvalue", "vcr", "cvcr"}, path);
  std::vector<EigenRow> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    check_field_count(row, 4);
    EigenRow e;
    e.component = static_cast<int>(parse_double(row.fields[0], row.line, "component"));
    e.eigenvalue = parse_double(row.fields[1], row.line, "eigenvalue");
    e.vcr = parse_double(row.fields[2], row.line, "vcr");
    e.cvcr = parse_double(row.fields[3], row.line, "cvcr");
    out.push_back(e);
  }
  if (out.empty()) throw Error(Errc::EmptyInput, "'" + path + "' has no rows");
  return out;
}

std::vector<ScoreOhlcRow> parse_scores_csv(const std::string& path) {
  const auto rows = read_csv(path);
  check_header(rows, {"entity", "component", "open", "high", "low", "close"}, path);
  std::vector<ScoreOhlcRow> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    check_field_count(row, 6);
    ScoreOhlcRow s;
    s.entity = row.fields[0];
    s.component = static_cast<int>(parse_double(row.fields[1], row.line, "component"));
    s.bar.open = parse_double(row.fields[2], row.line, "open");
    s.bar.high = parse_double(row.fields[3], row.line, "high");
    s.bar.low = parse_double(row.fields[4], row.line, "low");
    s.bar.close = parse_double(row.fields[5], row.line, "close");
    out.push_back(std::move(s));
  }
  if (out.empty()) throw Error(Errc::EmptyInput, "'" + path + "' has no rows");
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_abbreviations_csv(
    const std::string& path) {
  const auto rows = read_csv(path);
  check_header(rows, {"abbreviation", "market"}, path);
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    check_field_count(rows[r], 2);
    out.emplace_back(rows[r].fields[0], rows[r].fields[1]);
  }
  return out;
}

}  // namespace ohlc
