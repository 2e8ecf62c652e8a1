#include "adasample/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "adasample/errors.hpp"

namespace adasample {
namespace {

constexpr double kW = 880, kH = 560;
constexpr double kLeft = 72, kRight = 24, kTop = 44, kBottom = 56;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void fix() {
    if (lo > hi) { lo = 0.0; hi = 1.0; }
    if (lo == hi) { lo -= 0.5; hi += 0.5; }
  }
};

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series, bool log_y) {
  // transform once, dropping points a polyline cannot carry
  std::vector<std::vector<std::pair<double, double>>> pts(series.size());
  Range rx, ry;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const PlotSeries& sr = series[s];
    if (sr.x.size() != sr.y.size()) throw ConfigError("plot series length mismatch");
    for (std::size_t i = 0; i < sr.x.size(); ++i) {
      double x = sr.x[i], y = sr.y[i];
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (log_y) {
        if (!(y > 0.0)) continue;
        y = std::log10(y);
      }
      pts[s].emplace_back(x, y);
      rx.add(x);
      ry.add(y);
    }
  }
  rx.fix();
  ry.fix();

  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - ry.lo) / (ry.hi - ry.lo) * ph; };

  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
      << kH << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << esc(title) << "</text>\n";

  // grid and ticks
  for (int i = 0; i <= 5; ++i) {
    const double tx = rx.lo + (rx.hi - rx.lo) * i / 5.0;
    const double ty = ry.lo + (ry.hi - ry.lo) * i / 5.0;
    const double gx = px(tx), gy = py(ty);
    out << "<line x1=\"" << num(gx) << "\" y1=\"" << kTop << "\" x2=\"" << num(gx)
        << "\" y2=\"" << kTop + ph << "\" stroke=\"#dddddd\"/>\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << num(gy) << "\" x2=\"" << kLeft + pw
        << "\" y2=\"" << num(gy) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << num(gx) << "\" y=\"" << kTop + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << num(tx) << "</text>\n"
        << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(gy + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << (log_y ? "1e" + num(ty) : num(ty)) << "</text>\n";
  }
  // axes
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw
      << "\" y2=\"" << kTop + ph << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + ph << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << esc(x_label) << "</text>\n"
      << "<text x=\"18\" y=\"" << kTop + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << kTop + ph / 2 << ")\">" << esc(y_label) << "</text>\n";

  for (std::size_t s = 0; s < pts.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
    if (pts[s].size() >= 2) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : pts[s]) out << num(px(x)) << ',' << num(py(y)) << ' ';
      out << "\"/>\n";
    }
    if (pts[s].size() <= 50) {
      for (const auto& [x, y] : pts[s])
        out << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y))
            << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    // legend row
    const double ly = kTop + 10 + 16 * static_cast<double>(s);
    out << "<line x1=\"" << kLeft + pw - 150 << "\" y1=\"" << ly << "\" x2=\""
        << kLeft + pw - 120 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kLeft + pw - 114 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << esc(series[s].label)
        << "</text>\n";
  }
  out << "</svg>\n";
  out.flush();
  if (!out.good()) throw IoError("failed writing " + path);
}

}  // namespace adasample
