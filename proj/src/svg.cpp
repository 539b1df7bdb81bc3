#include "ohlc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ohlc/csv.hpp"
#include "ohlc/ppca.hpp"

namespace ohlc {

namespace {

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void check_spec(const ChartSpec& spec) {
  const double plot_w = spec.width - spec.margin_left - spec.margin_right;
  const double plot_h = spec.height - spec.margin_top - spec.margin_bottom;
  if (!(plot_w > 0.0) || !(plot_h > 0.0)) {
    throw Error(Errc::BadNumeric, "chart dimensions leave no plot area");
  }
}

struct Frame {
  double left, right, top, bottom;  // plot rectangle in pixels
  double v_lo, v_hi;                // value range mapped onto it

  double x_slot(std::size_t i, std::size_t n, double frac = 0.5) const {
    return left + (right - left) * ((static_cast<double>(i) + frac) /
                                    static_cast<double>(n));
  }
  double y_of(double v) const {
    return bottom - (v - v_lo) / (v_hi - v_lo) * (bottom - top);
  }
};

void open_svg(std::ostringstream& out, const ChartSpec& spec) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(spec.width)
      << "\" height=\"" << px(spec.height) << "\" viewBox=\"0 0 " << px(spec.width)
      << " " << px(spec.height) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << px(spec.width) << "\" height=\""
      << px(spec.height) << "\" fill=\"#ffffff\"/>\n";
  if (!spec.title.empty()) {
    out << "<text x=\"" << px(spec.width / 2) << "\" y=\"" << px(spec.margin_top - 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
        << escape_xml(spec.title) << "</text>\n";
  }
}

void draw_axes(std::ostringstream& out, const ChartSpec& spec, const Frame& f,
               int ticks) {
  out << "<line x1=\"" << px(f.left) << "\" y1=\"" << px(f.bottom) << "\" x2=\""
      << px(f.right) << "\" y2=\"" << px(f.bottom)
      << "\" stroke=\"#303030\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << px(f.left) << "\" y1=\"" << px(f.top) << "\" x2=\""
      << px(f.left) << "\" y2=\"" << px(f.bottom)
      << "\" stroke=\"#303030\" stroke-width=\"1\"/>\n";
  for (int t = 0; t <= ticks; ++t) {
    const double v = f.v_lo + (f.v_hi - f.v_lo) * t / ticks;
    const double y = f.y_of(v);
    out << "<line x1=\"" << px(f.left) << "\" y1=\"" << px(y) << "\" x2=\""
        << px(f.right) << "\" y2=\"" << px(y)
        << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << px(f.left - 8) << "\" y=\"" << px(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << format_number(v) << "</text>\n";
  }
  if (!spec.y_label.empty()) {
    const double cx = f.left - 52;
    const double cy = (f.top + f.bottom) / 2;
    out << "<text x=\"" << px(cx) << "\" y=\"" << px(cy)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\""
        << " transform=\"rotate(-90 " << px(cx) << " " << px(cy) << ")\">"
        << escape_xml(spec.y_label) << "</text>\n";
  }
  if (!spec.x_label.empty()) {
    out << "<text x=\"" << px((f.left + f.right) / 2) << "\" y=\""
        << px(f.bottom + 72)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << escape_xml(spec.x_label) << "</text>\n";
  }
}

void x_tick_label(std::ostringstream& out, double x, double y, const std::string& text) {
  out << "<text x=\"" << px(x) << "\" y=\"" << px(y)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\""
      << " transform=\"rotate(-40 " << px(x) << " " << px(y) << ")\">"
      << escape_xml(text) << "</text>\n";
}

}  // namespace

std::string render_candlestick_svg(std::span<const std::string> labels,
                                   std::span<const OhlcBar> bars,
                                   const ChartSpec& spec) {
  check_spec(spec);
  if (bars.empty()) throw Error(Errc::EmptyInput, "no bars to draw");
  if (labels.size() != bars.size()) {
    throw Error(Errc::LengthMismatch, "label count does not match bar count");
  }

  double v_lo = bars[0].low, v_hi = bars[0].high;
  for (const OhlcBar& b : bars) {
    v_lo = std::min(v_lo, b.low);
    v_hi = std::max(v_hi, b.high);
  }
  const double span = v_hi - v_lo;
  const double pad = span > 0.0 ? span * 0.05 : 1.0;
  Frame f{spec.margin_left, spec.width - spec.margin_right, spec.margin_top,
          spec.height - spec.margin_bottom, v_lo - pad, v_hi + pad};

  std::ostringstream out;
  open_svg(out, spec);
  draw_axes(out, spec, f, 6);

  const std::size_t n = bars.size();
  const double slot = (f.right - f.left) / static_cast<double>(n);
  const double half_body = std::min(slot * 0.3, 18.0);
  for (std::size_t i = 0; i < n; ++i) {
    const OhlcBar& b = bars[i];
    const double cx = f.x_slot(i, n);
    const char* color = spec.neutral_color.c_str();
    switch (bar_body(b)) {
      case BarBody::Bull: color = spec.bull_color.c_str(); break;
      case BarBody::Bear: color = spec.bear_color.c_str(); break;
      case BarBody::Doji: break;
    }
    out << "<line x1=\"" << px(cx) << "\" y1=\"" << px(f.y_of(b.low)) << "\" x2=\""
        << px(cx) << "\" y2=\"" << px(f.y_of(b.high))
        << "\" stroke=\"#303030\" stroke-width=\"1\"/>\n";
    const double body_top = f.y_of(std::max(b.open, b.close));
    const double body_bot = f.y_of(std::min(b.open, b.close));
    const double body_h = std::max(body_bot - body_top, 0.75);
    out << "<rect x=\"" << px(cx - half_body) << "\" y=\"" << px(body_top)
        << "\" width=\"" << px(2 * half_body) << "\" height=\"" << px(body_h)
        << "\" fill=\"" << color << "\" stroke=\"#303030\" stroke-width=\"0.5\"/>\n";
    x_tick_label(out, cx + 4, f.bottom + 16, labels[i]);
  }

  out << "</svg>\n";
  return out.str();
}

std::string render_scree_svg(std::span<const double> eigenvalues,
                             const ChartSpec& spec) {
  check_spec(spec);
  if (eigenvalues.empty()) throw Error(Errc::EmptyInput, "no eigenvalues to draw");
  const std::size_t p = eigenvalues.size();

  Frame f{spec.margin_left, spec.width - spec.margin_right, spec.margin_top,
          spec.height - spec.margin_bottom, 0.0, 1.05};

  std::ostringstream out;
  open_svg(out, spec);
  draw_axes(out, spec, f, 5);

  // Per-component contribution bars with the cumulative line on top.
  const double total = static_cast<double>(p);
  const double slot = (f.right - f.left) / static_cast<double>(p);
  const double half_bar = slot * 0.28;
  double cum = 0.0;
  std::ostringstream line_points;
  std::ostringstream markers;
  for (std::size_t h = 0; h < p; ++h) {
    const double vcr = eigenvalues[h] / total;
    cum += vcr;
    // Zero eigenvalues can land a hair below zero numerically; keep the
    // geometry within the frame.
    const double bar_v = std::clamp(vcr, 0.0, f.v_hi);
    const double line_v = std::clamp(cum, 0.0, f.v_hi);
    const double cx = f.x_slot(h, p);
    out << "<rect x=\"" << px(cx - half_bar) << "\" y=\"" << px(f.y_of(bar_v))
        << "\" width=\"" << px(2 * half_bar) << "\" height=\""
        << px(f.y_of(0.0) - f.y_of(bar_v))
        << "\" fill=\"#7ba7d7\" stroke=\"#303030\" stroke-width=\"0.5\"/>\n";
    if (h) line_points << ' ';
    line_points << px(cx) << ',' << px(f.y_of(line_v));
    markers << "<circle cx=\"" << px(cx) << "\" cy=\"" << px(f.y_of(line_v))
            << "\" r=\"3\" fill=\"#c2503c\"/>\n";
    x_tick_label(out, cx + 4, f.bottom + 16, "PC" + std::to_string(h + 1));
  }
  out << "<polyline points=\"" << line_points.str()
      << "\" fill=\"none\" stroke=\"#c2503c\" stroke-width=\"1.5\"/>\n";
  out << markers.str();
  out << "</svg>\n";
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out.is_open()) {
    throw Error(Errc::IoError, "cannot write '" + path + "'");
  }
  out << content;
  out.flush();
  if (!out) throw Error(Errc::IoError, "write failed for '" + path + "'");
}

}  // namespace ohlc
