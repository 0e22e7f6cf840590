#include "upq/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace upq {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '&': out += "&amp;"; break;
    default: out += c;
    }
  }
  return out;
}

struct Axis {
  bool log = false;
  double lo = 0.0, hi = 1.0;

  double t(double v) const { return log ? std::log10(v) : v; }
  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }

  void fit(const std::vector<double>& values) {
    double a = std::numeric_limits<double>::infinity(), b = -a;
    for (double v : values)
      if (usable(v)) {
        a = std::min(a, t(v));
        b = std::max(b, t(v));
      }
    if (!std::isfinite(a)) a = 0.0, b = 1.0;
    if (b - a < 1e-12) a -= 0.5, b += 0.5;
    const double pad = 0.05 * (b - a);
    lo = a - pad;
    hi = b + pad;
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (double e = std::ceil(lo); e <= hi; e += 1.0) out.push_back(e);
      return out;
    }
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    for (double v = std::ceil(lo / step) * step; v <= hi; v += step) out.push_back(v);
    return out;
  }

  std::string label(double tick) const { return log ? "1e" + fmt(tick) : fmt(std::abs(tick) < 1e-14 ? 0.0 : tick); }
};

} // namespace

std::string render_svg(const Plot& plot, int width, int height) {
  const double left = 70, right = 150, top = 40, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;

  Axis ax{plot.log_x}, ay{plot.log_y};
  std::vector<double> xs, ys;
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xs.push_back(s.x[i]);
      const double e = i < s.err.size() ? s.err[i] : 0.0;
      ys.push_back(s.y[i] - e);
      ys.push_back(s.y[i] + e);
      ys.push_back(s.y[i]);
    }
  ax.fit(xs);
  ay.fit(ys);
  auto px = [&](double v) { return left + (ax.t(v) - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double v) { return top + ph - (ay.t(v) - ay.lo) / (ay.hi - ay.lo) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(plot.title)
    << "</text>\n";
  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : ax.ticks()) {
    const double x = left + (t - ax.lo) / (ax.hi - ax.lo) * pw;
    o << "<line x1=\"" << fmt(x) << "\" y1=\"" << top + ph << "\" x2=\"" << fmt(x) << "\" y2=\"" << top + ph + 5
      << "\" stroke=\"black\"/><text x=\"" << fmt(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
      << ax.label(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = top + ph - (t - ay.lo) / (ay.hi - ay.lo) * ph;
    o << "<line x1=\"" << left - 5 << "\" y1=\"" << fmt(y) << "\" x2=\"" << left << "\" y2=\"" << fmt(y)
      << "\" stroke=\"black\"/><text x=\"" << left - 8 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">"
      << ay.label(t) << "</text>\n";
  }
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
    << escape(plot.x_label) << "</text>\n";
  o << "<text transform=\"translate(16," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(plot.y_label) << "</text>\n";

  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    std::ostringstream pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) continue;
      const double x = px(s.x[i]), y = py(s.y[i]);
      pts << fmt(x) << ',' << fmt(y) << ' ';
      o << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"" << (s.line ? 2 : 3) << "\" fill=\"" << colour
        << "\"/>\n";
      if (i < s.err.size() && s.err[i] > 0 && ay.usable(s.y[i] - s.err[i]))
        o << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(py(s.y[i] - s.err[i])) << "\" x2=\"" << fmt(x) << "\" y2=\""
          << fmt(py(s.y[i] + s.err[i])) << "\" stroke=\"" << colour << "\"/>\n";
    }
    if (s.line) o << "<polyline fill=\"none\" stroke=\"" << colour << "\" points=\"" << pts.str() << "\"/>\n";
    const double ly = top + 14 + 16 * static_cast<double>(k);
    o << "<rect x=\"" << left + pw + 10 << "\" y=\"" << ly - 8 << "\" width=\"10\" height=\"10\" fill=\"" << colour
      << "\"/><text x=\"" << left + pw + 25 << "\" y=\"" << ly << "\">" << escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

} // namespace upq
