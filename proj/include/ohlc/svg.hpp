#pragma once

#include <span>
#include <string>

#include "ohlc/ohlc_core.hpp"

namespace ohlc {

struct ChartSpec {
  double width = 960.0;
  double height = 600.0;
  double margin_left = 70.0;
  double margin_right = 24.0;
  double margin_top = 44.0;
  double margin_bottom = 96.0;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::string bull_color = "#2e9e4f";
  std::string bear_color = "#d23f31";
  std::string neutral_color = "#8a8a8a";
};

// One candle per bar: wick low->high, body between open and close, green
// body when close > open, red when open > close, gray when equal. Output is
// stable: identical input yields byte-identical SVG. Throws EmptyInput.
std::string render_candlestick_svg(std::span<const std::string> labels,
                                   std::span<const OhlcBar> bars,
                                   const ChartSpec& spec = {});

// Per-component variance contribution bars with the cumulative line overlaid.
// Expects a nonempty descending eigenvalue list. Throws EmptyInput.
std::string render_scree_svg(std::span<const double> eigenvalues,
                             const ChartSpec& spec = {});

void write_text_file(const std::string& path, const std::string& content);

}  // namespace ohlc
