#include "spca/io/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>

namespace spca::io {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};
constexpr double kLeft = 64;
constexpr double kRight = 150;
constexpr double kTop = 36;
constexpr double kBottom = 52;
constexpr int kTicks = 5;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo;
  double hi;
};

Range fit(double lo, double hi, const std::vector<Series>& series, bool use_x) {
  double dlo = INFINITY;
  double dhi = -INFINITY;
  for (const auto& s : series) {
    for (const double v : use_x ? s.x : s.y) {
      if (!std::isfinite(v)) continue;
      dlo = std::min(dlo, v);
      dhi = std::max(dhi, v);
    }
  }
  if (!std::isfinite(dlo)) {
    dlo = 0;
    dhi = 1;
  }
  Range r{std::isnan(lo) ? dlo : lo, std::isnan(hi) ? dhi : hi};
  if (!(r.hi > r.lo)) {
    r.lo -= 0.5;
    r.hi += 0.5;
  }
  return r;
}

}  // namespace

std::string line_chart_svg(const PlotSpec& spec, const std::vector<Series>& series) {
  const Range xr = fit(spec.x_min, spec.x_max, series, true);
  const Range yr = fit(spec.y_min, spec.y_max, series, false);
  const double pw = spec.width - kLeft - kRight;
  const double ph = spec.height - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return kTop + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(spec.width) + "\" height=\"" +
         num(spec.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(spec.width / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(spec.title) + "</text>\n";
  out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int t = 0; t <= kTicks; ++t) {
    const double fx = xr.lo + (xr.hi - xr.lo) * t / kTicks;
    const double fy = yr.lo + (yr.hi - yr.lo) * t / kTicks;
    out += "<line x1=\"" + num(sx(fx)) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(sx(fx)) + "\" y2=\"" +
           num(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(sx(fx)) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
           tick_label(fx) + "</text>\n";
    out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(sy(fy)) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
           num(sy(fy)) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(sy(fy) + 4) + "\" text-anchor=\"end\">" +
           tick_label(fy) + "</text>\n";
  }
  out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(spec.height - 10) + "\" text-anchor=\"middle\">" +
         escape(spec.x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num(kTop + ph / 2) + ")\">" + escape(spec.y_label) + "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    const char* color = kPalette[s % kPalette.size()];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\"";
    if (ser.dashed) out += " stroke-dasharray=\"6 4\"";
    out += " points=\"";
    const std::size_t count = std::min(ser.x.size(), ser.y.size());
    bool first = true;
    for (std::size_t i = 0; i < count; ++i) {
      if (!std::isfinite(ser.x[i]) || !std::isfinite(ser.y[i])) continue;
      if (!first) out += ' ';
      out += num(sx(ser.x[i])) + "," + num(sy(ser.y[i]));
      first = false;
    }
    out += "\"/>\n";
    const double ly = kTop + 12 + 18.0 * static_cast<double>(s);
    const double lx = kLeft + pw + 12;
    out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 24) + "\" y2=\"" + num(ly) +
           "\" stroke=\"" + color + "\" stroke-width=\"1.5\"" + (ser.dashed ? " stroke-dasharray=\"6 4\"" : "") +
           "/>\n";
    out += "<text x=\"" + num(lx + 30) + "\" y=\"" + num(ly + 4) + "\">" + escape(ser.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace spca::io
