#include "volest/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace volest::svg {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 72, kRight = 24, kTop = 40, kBottom = 56;

const char* kPalette[] = {"#1b6ca8", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct AxisScale {
  double lo = 0.0, hi = 1.0;
  bool log = false;
  double map(double v, double pix_lo, double pix_hi) const {
    double t = log ? std::log10(v) : v;
    double a = log ? std::log10(lo) : lo;
    double b = log ? std::log10(hi) : hi;
    if (b <= a) b = a + 1.0;
    return pix_lo + (t - a) / (b - a) * (pix_hi - pix_lo);
  }
  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int e0 = static_cast<int>(std::floor(std::log10(lo)));
      const int e1 = static_cast<int>(std::ceil(std::log10(hi)));
      for (int e = e0; e <= e1; ++e) {
        const double t = std::pow(10.0, e);
        if (t >= lo / 1.001 && t <= hi * 1.001) out.push_back(t);
      }
      if (out.size() < 2) {  // narrow range: fall back to 2-5-10 minor ticks
        out.clear();
        for (int e = e0 - 1; e <= e1; ++e) {
          for (double m : {1.0, 2.0, 5.0}) {
            const double t = m * std::pow(10.0, e);
            if (t >= lo / 1.001 && t <= hi * 1.001) out.push_back(t);
          }
        }
      }
    } else {
      const double span = hi - lo;
      const double raw = span / 5.0;
      const double mag = std::pow(10.0, std::floor(std::log10(raw)));
      double step = mag;
      for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
          step = m * mag;
          break;
        }
      }
      const double first = std::ceil(lo / step) * step;
      for (double t = first; t <= hi + step * 1e-9; t += step) out.push_back(t);
    }
    return out;
  }
};

}  // namespace

void write_line_chart(const std::string& path, const ChartSpec& spec,
                      const std::vector<Series>& series) {
  AxisScale xs, ys;
  xs.log = spec.log_x;
  ys.log = spec.log_y;
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const auto& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (spec.log_x && s.x[i] <= 0.0) continue;
      if (spec.log_y && s.y[i] <= 0.0) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  if (!(xlo <= xhi)) {
    xlo = ylo = 0.1;
    xhi = yhi = 1.0;
  }
  if (xlo == xhi) {
    xlo = spec.log_x ? xlo / 2.0 : xlo - 1.0;
    xhi = spec.log_x ? xhi * 2.0 : xhi + 1.0;
  }
  if (ylo == yhi) {
    ylo = spec.log_y ? ylo / 2.0 : ylo - 1.0;
    yhi = spec.log_y ? yhi * 2.0 : yhi + 1.0;
  }
  if (!spec.log_y) {
    const double pad = 0.05 * (yhi - ylo);
    ylo -= pad;
    yhi += pad;
  }
  xs.lo = xlo;
  xs.hi = xhi;
  ys.lo = ylo;
  ys.hi = yhi;

  const double px0 = kLeft, px1 = kWidth - kRight;
  const double py0 = kHeight - kBottom, py1 = kTop;  // y grows downward in SVG

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write svg: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << spec.title << "</text>\n";

  for (double t : xs.ticks()) {
    const double px = xs.map(t, px0, px1);
    out << "<line x1=\"" << num(px) << "\" y1=\"" << num(py0) << "\" x2=\"" << num(px)
        << "\" y2=\"" << num(py1) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << num(px) << "\" y=\"" << num(py0 + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << label(t)
        << "</text>\n";
  }
  for (double t : ys.ticks()) {
    const double py = ys.map(t, py0, py1);
    out << "<line x1=\"" << num(px0) << "\" y1=\"" << num(py) << "\" x2=\"" << num(px1)
        << "\" y2=\"" << num(py) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << num(px0 - 6) << "\" y=\"" << num(py + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label(t)
        << "</text>\n";
  }
  out << "<rect x=\"" << num(px0) << "\" y=\"" << num(py1) << "\" width=\"" << num(px1 - px0)
      << "\" height=\"" << num(py0 - py1) << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << num((px0 + px1) / 2) << "\" y=\"" << num(kHeight - 14)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << spec.xlabel
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << num((py0 + py1) / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << num((py0 + py1) / 2) << ")\">" << spec.ylabel << "</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i) {
      if ((spec.log_x && s.x[i] <= 0.0) || (spec.log_y && s.y[i] <= 0.0)) continue;
      out << num(xs.map(s.x[i], px0, px1)) << ',' << num(ys.map(s.y[i], py0, py1)) << ' ';
    }
    out << "\"/>\n";
    for (size_t i = 0; i < s.x.size(); ++i) {
      if ((spec.log_x && s.x[i] <= 0.0) || (spec.log_y && s.y[i] <= 0.0)) continue;
      out << "<circle cx=\"" << num(xs.map(s.x[i], px0, px1)) << "\" cy=\""
          << num(ys.map(s.y[i], py0, py1)) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    const double ly = py1 + 16 + 16 * static_cast<double>(si);
    out << "<line x1=\"" << num(px1 - 150) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
        << num(px1 - 126) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"1.8\"/>\n"
        << "<text x=\"" << num(px1 - 120) << "\" y=\"" << num(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.name << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace volest::svg
