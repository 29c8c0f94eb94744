#include "wflo/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace wflo::svg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
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

// Piecewise-linear blue -> teal -> yellow ramp, t in [0,1].
std::string color(double t) {
  static constexpr std::array<std::array<double, 3>, 3> kStops{{{68, 1, 84}, {33, 145, 140}, {253, 231, 37}}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const double pos = t * 2.0;
  const auto k = static_cast<std::size_t>(std::min(pos, 1.999));
  const double f = pos - static_cast<double>(k);
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(kStops[k][0] + f * (kStops[k + 1][0] - kStops[k][0]))),
                static_cast<int>(std::lround(kStops[k][1] + f * (kStops[k + 1][1] - kStops[k][1]))),
                static_cast<int>(std::lround(kStops[k][2] + f * (kStops[k + 1][2] - kStops[k][2]))));
  return buf;
}

const std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Frame {
  double left = 70, top = 40, width = 560, height = 320;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * width; }
  double py(double y) const { return top + height - (y - y0) / (y1 - y0) * height; }
};

void pad_range(double& lo, double& hi) {
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
    return;
  }
  const double m = 0.05 * (hi - lo);
  lo -= m;
  hi += m;
}

void open(std::ostringstream& out, double w, double h, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(title) << "</text>\n";
}

void axes(std::ostringstream& out, const Frame& f, const std::string& y_label) {
  out << "<rect x=\"" << num(f.left) << "\" y=\"" << num(f.top) << "\" width=\"" << num(f.width)
      << "\" height=\"" << num(f.height) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = f.y0 + (f.y1 - f.y0) * k / 4.0;
    out << "<text x=\"" << num(f.left - 6) << "\" y=\"" << num(f.py(v) + 4)
        << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }
  out << "<text x=\"16\" y=\"" << num(f.top + f.height / 2) << "\" transform=\"rotate(-90 16 "
      << num(f.top + f.height / 2) << ")\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
}

}  // namespace

std::string boxplot(const std::string& title, const std::string& y_label, const std::vector<Box>& boxes) {
  std::ostringstream out;
  Frame f;
  f.width = std::max(200.0, 90.0 * static_cast<double>(boxes.size()));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& b : boxes) {
    lo = std::min(lo, b.min);
    hi = std::max(hi, b.max);
  }
  if (boxes.empty()) lo = hi = 0.0;
  pad_range(lo, hi);
  f.y0 = lo;
  f.y1 = hi;
  open(out, f.left + f.width + 30, f.top + f.height + 50, title);
  axes(out, f, y_label);
  const double slot = f.width / static_cast<double>(std::max<std::size_t>(1, boxes.size()));
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto& b = boxes[i];
    const double cx = f.left + slot * (static_cast<double>(i) + 0.5);
    const double hw = std::min(30.0, slot * 0.3);
    out << "<line x1=\"" << num(cx) << "\" y1=\"" << num(f.py(b.min)) << "\" x2=\"" << num(cx)
        << "\" y2=\"" << num(f.py(b.max)) << "\" stroke=\"black\"/>\n";
    out << "<rect x=\"" << num(cx - hw) << "\" y=\"" << num(f.py(b.q3)) << "\" width=\"" << num(2 * hw)
        << "\" height=\"" << num(std::max(0.5, f.py(b.q1) - f.py(b.q3)))
        << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << num(cx - hw) << "\" y1=\"" << num(f.py(b.median)) << "\" x2=\""
        << num(cx + hw) << "\" y2=\"" << num(f.py(b.median)) << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(cx) << "\" y=\"" << num(f.top + f.height + 18)
        << "\" text-anchor=\"middle\">" << escape(b.label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string loglog(const std::string& title, const std::vector<Series>& series) {
  std::ostringstream out;
  Frame f;
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0 && y > 0.0)) continue;
      xlo = std::min(xlo, std::log10(x));
      xhi = std::max(xhi, std::log10(x));
      ylo = std::min(ylo, std::log10(y));
      yhi = std::max(yhi, std::log10(y));
    }
  if (!std::isfinite(xlo)) xlo = xhi = ylo = yhi = 0.0;
  pad_range(xlo, xhi);
  pad_range(ylo, yhi);
  f.x0 = xlo;
  f.x1 = xhi;
  f.y0 = ylo;
  f.y1 = yhi;
  open(out, f.left + f.width + 160, f.top + f.height + 50, title);
  axes(out, f, "log10 mean seconds");
  out << "<text x=\"" << num(f.left + f.width / 2) << "\" y=\"" << num(f.top + f.height + 36)
      << "\" text-anchor=\"middle\">log10 N</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* c = kPalette[k % kPalette.size()];
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0 && y > 0.0)) continue;
      out << "<circle cx=\"" << num(f.px(std::log10(x))) << "\" cy=\"" << num(f.py(std::log10(y)))
          << "\" r=\"4\" fill=\"" << c << "\"/>\n";
    }
    if (s.fit) {
      // Fit is in natural logs; convert to base 10 for plotting.
      const auto [slope, intercept] = *s.fit;
      auto y_at = [&](double lx) { return (slope * lx * std::log(10.0) + intercept) / std::log(10.0); };
      out << "<line x1=\"" << num(f.px(f.x0)) << "\" y1=\"" << num(f.py(y_at(f.x0))) << "\" x2=\""
          << num(f.px(f.x1)) << "\" y2=\"" << num(f.py(y_at(f.x1))) << "\" stroke=\"" << c
          << "\" stroke-dasharray=\"5,3\"/>\n";
    }
    out << "<text x=\"" << num(f.left + f.width + 12) << "\" y=\"" << num(f.top + 16 + 18.0 * k)
        << "\" fill=\"" << c << "\">" << escape(s.name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string heatmap(const std::string& title, const std::vector<std::vector<std::optional<double>>>& cells) {
  std::ostringstream out;
  const std::size_t n = cells.size();
  const double cell = n > 0 ? std::max(2.0, 480.0 / static_cast<double>(n)) : 1.0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& row : cells)
    for (const auto& v : row)
      if (v) {
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
      }
  const double span = hi > lo ? hi - lo : 1.0;
  open(out, cell * static_cast<double>(n) + 40, cell * static_cast<double>(n) + 60, title);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < cells[i].size(); ++j) {
      if (!cells[i][j]) continue;
      out << "<rect x=\"" << num(20 + cell * static_cast<double>(j)) << "\" y=\""
          << num(40 + cell * static_cast<double>(i)) << "\" width=\"" << num(cell) << "\" height=\""
          << num(cell) << "\" fill=\"" << color((*cells[i][j] - lo) / span) << "\"/>\n";
    }
  out << "</svg>\n";
  return out.str();
}

std::string field(const std::string& title, const Eigen::MatrixXd& values,
                  const std::vector<std::pair<double, double>>& markers) {
  std::ostringstream out;
  const auto rows = values.rows();
  const auto cols = values.cols();
  const double cell = std::max(1.0, 480.0 / static_cast<double>(std::max<Eigen::Index>(1, std::max(rows, cols))));
  const double lo = rows > 0 ? values.minCoeff() : 0.0;
  const double hi = rows > 0 ? values.maxCoeff() : 1.0;
  const double span = hi > lo ? hi - lo : 1.0;
  open(out, cell * static_cast<double>(cols) + 40, cell * static_cast<double>(rows) + 60, title);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      out << "<rect x=\"" << num(20 + cell * static_cast<double>(c)) << "\" y=\""
          << num(40 + cell * static_cast<double>(r)) << "\" width=\"" << num(cell + 0.05)
          << "\" height=\"" << num(cell + 0.05) << "\" fill=\"" << color((values(r, c) - lo) / span)
          << "\"/>\n";
  for (const auto& [c, r] : markers)
    out << "<circle cx=\"" << num(20 + cell * (c + 0.5)) << "\" cy=\"" << num(40 + cell * (r + 0.5))
        << "\" r=\"" << num(std::max(3.0, cell * 1.5)) << "\" fill=\"none\" stroke=\"white\" stroke-width=\"2\"/>\n";
  out << "</svg>\n";
  return out.str();
}

std::string two_panel(const std::string& title, const std::string& x_label,
                      const std::vector<double>& x, const std::string& top_label,
                      const std::vector<double>& top, const std::string& bottom_label,
                      const std::vector<double>& bottom) {
  std::ostringstream out;
  Frame a;
  a.height = 200;
  Frame b = a;
  b.top = a.top + a.height + 40;
  double xlo = x.empty() ? 0.0 : *std::min_element(x.begin(), x.end());
  double xhi = x.empty() ? 1.0 : *std::max_element(x.begin(), x.end());
  pad_range(xlo, xhi);
  a.x0 = b.x0 = xlo;
  a.x1 = b.x1 = xhi;
  auto range = [](const std::vector<double>& v, Frame& f) {
    double lo = v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
    double hi = v.empty() ? 1.0 : *std::max_element(v.begin(), v.end());
    pad_range(lo, hi);
    f.y0 = lo;
    f.y1 = hi;
  };
  range(top, a);
  range(bottom, b);
  open(out, a.left + a.width + 30, b.top + b.height + 50, title);
  auto panel = [&](const Frame& f, const std::string& label, const std::vector<double>& y) {
    axes(out, f, label);
    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
      out << num(f.px(x[i])) << ',' << num(f.py(y[i])) << ' ';
    out << "\"/>\n";
  };
  panel(a, top_label, top);
  panel(b, bottom_label, bottom);
  out << "<text x=\"" << num(b.left + b.width / 2) << "\" y=\"" << num(b.top + b.height + 36)
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace wflo::svg
