#include "isacsim/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "isacsim/errors.hpp"

namespace isacsim {
namespace svgplot {

namespace {

const char* kPalette[6] = {"#1f6fb2", "#d1495b", "#2e933c",
                           "#8a4fbf", "#e08f2d", "#4a4a4a"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  void expand(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double span() const { return hi - lo; }
};

std::vector<double> ticks(const Range& r, int target) {
  const double raw = r.span() / std::max(target, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  std::vector<double> out;
  const double first = std::ceil(r.lo / step) * step;
  for (double t = first; t <= r.hi + step * 1e-9; t += step) {
    out.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return out;
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<Series>& series, int width,
                       int height) {
  if (series.empty()) throw ConfigError("line_chart: no series");
  Range xr{series[0].x.empty() ? 0.0 : series[0].x[0],
           series[0].x.empty() ? 1.0 : series[0].x[0]};
  Range yr{0.0, 1e-300};
  for (const Series& s : series) {
    if (s.x.size() != s.y.size()) {
      throw ShapeError("line_chart: series '" + s.label +
                       "' x/y length mismatch");
    }
    if (s.x.empty()) throw ConfigError("line_chart: empty series");
    for (double v : s.x) xr.expand(v);
    for (double v : s.y) yr.expand(v);
  }
  if (xr.span() <= 0.0) xr.hi = xr.lo + 1.0;
  if (yr.span() <= 0.0) yr.hi = yr.lo + 1.0;
  yr.hi += 0.05 * yr.span();

  const double ml = 64, mr = 16, mt = 40, mb = 48;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto px = [&](double x) { return ml + (x - xr.lo) / xr.span() * pw; };
  auto py = [&](double y) { return mt + ph - (y - yr.lo) / yr.span() * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << escape(title) << "</text>\n";

  for (double t : ticks(xr, 7)) {
    const double x = px(t);
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(mt) << "\" x2=\""
        << fmt(x) << "\" y2=\"" << fmt(mt + ph)
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(mt + ph + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt(t) << "</text>\n";
  }
  for (double t : ticks(yr, 6)) {
    const double y = py(t);
    out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(y) << "\" x2=\""
        << fmt(ml + pw) << "\" y2=\"" << fmt(y)
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << fmt(ml - 6) << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt(t) << "</text>\n";
  }
  out << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\""
      << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">"
      << escape(x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << fmt(mt + ph / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 "
      << fmt(mt + ph / 2) << ")\">" << escape(y_label) << "</text>\n";

  for (size_t i = 0; i < series.size(); ++i) {
    const Series& s = series[i];
    const char* color = kPalette[i % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\" points=\"";
    for (size_t j = 0; j < s.x.size(); ++j) {
      if (j) out << ' ';
      out << fmt(px(s.x[j])) << ',' << fmt(py(s.y[j]));
    }
    out << "\"/>\n";
    for (size_t j = 0; j < s.x.size(); ++j) {
      out << "<circle cx=\"" << fmt(px(s.x[j])) << "\" cy=\""
          << fmt(py(s.y[j])) << "\" r=\"2.6\" fill=\"" << color << "\"/>\n";
    }
    const double ly = mt + 14 + 16 * double(i);
    out << "<line x1=\"" << fmt(ml + 10) << "\" y1=\"" << fmt(ly - 4)
        << "\" x2=\"" << fmt(ml + 34) << "\" y2=\"" << fmt(ly - 4)
        << "\" stroke=\"" << color << "\" stroke-width=\"1.8\"/>\n";
    out << "<text x=\"" << fmt(ml + 40) << "\" y=\"" << fmt(ly)
        << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace svgplot
}  // namespace isacsim
