#include "pfrlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace pfrlab::svg {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string header(const std::string& title) {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
       "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) +
       " " + num(kHeight) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) +
       "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"15\">" +
       title + "</text>\n";
  return s;
}

struct Scale {
  double lo, hi;
  bool log;
  double pixel_lo, pixel_hi;

  double operator()(double v) const {
    const double t = log ? (std::log10(v) - std::log10(lo)) /
                               (std::log10(hi) - std::log10(lo))
                         : (v - lo) / (hi - lo);
    return pixel_lo + t * (pixel_hi - pixel_lo);
  }
};

std::string axis_ticks(const Scale& xs, const Scale& ys,
                       const std::string& x_label,
                       const std::string& y_label) {
  std::string s;
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kHeight - kBottom) +
       "\" x2=\"" + num(kWidth - kRight) + "\" y2=\"" +
       num(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" +
       num(kLeft) + "\" y2=\"" + num(kHeight - kBottom) +
       "\" stroke=\"black\"/>\n";
  const int n_ticks = 5;
  for (int k = 0; k <= n_ticks; ++k) {
    const double t = static_cast<double>(k) / n_ticks;
    const double xv = xs.log ? std::pow(10, std::log10(xs.lo) +
                                                t * (std::log10(xs.hi) -
                                                     std::log10(xs.lo)))
                             : xs.lo + t * (xs.hi - xs.lo);
    const double yv = ys.log ? std::pow(10, std::log10(ys.lo) +
                                                t * (std::log10(ys.hi) -
                                                     std::log10(ys.lo)))
                             : ys.lo + t * (ys.hi - ys.lo);
    s += "<text x=\"" + num(xs(xv)) + "\" y=\"" + num(kHeight - kBottom + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\">" +
         num(xv) + "</text>\n";
    s += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(ys(yv) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"11\">" +
         num(yv) + "</text>\n";
    s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(ys(yv)) + "\" x2=\"" +
         num(kWidth - kRight) + "\" y2=\"" + num(ys(yv)) +
         "\" stroke=\"#dddddd\"/>\n";
  }
  s += "<text x=\"" + num((kLeft + kWidth - kRight) / 2) + "\" y=\"" +
       num(kHeight - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"12\">" +
       x_label + "</text>\n";
  s += "<text x=\"16\" y=\"" + num((kTop + kHeight - kBottom) / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"12\" transform=\"rotate(-90 16 " +
       num((kTop + kHeight - kBottom) / 2) + ")\">" + y_label + "</text>\n";
  return s;
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<Series>& series, bool log_y) {
  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      const double y = log_y ? std::max(s.y[k], 1e-3) : s.y[k];
      x_lo = std::min(x_lo, s.x[k]);
      x_hi = std::max(x_hi, s.x[k]);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  if (x_lo >= x_hi) x_hi = x_lo + 1;
  if (y_lo >= y_hi) y_hi = y_lo + 1;
  if (log_y) y_lo = std::max(y_lo / 2, 1e-3);
  const Scale xs{x_lo, x_hi, false, kLeft + 10, kWidth - kRight - 10};
  const Scale ys{y_lo, log_y ? y_hi * 2 : y_hi, log_y, kHeight - kBottom,
                 kTop};

  std::string out = header(title);
  out += axis_ticks(xs, ys, x_label, y_label);
  double legend_y = kTop + 6;
  for (const auto& s : series) {
    std::string path = "M ";
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      const double y = log_y ? std::max(s.y[k], 1e-3) : s.y[k];
      path += num(xs(s.x[k])) + " " + num(ys(y)) + (k + 1 < s.x.size() ? " L " : "");
      out += "<circle cx=\"" + num(xs(s.x[k])) + "\" cy=\"" + num(ys(y)) +
             "\" r=\"3\" fill=\"" + s.color + "\"/>\n";
    }
    out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + s.color +
           "\" stroke-width=\"1.5\"" +
           (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
    out += "<line x1=\"" + num(kWidth - 190) + "\" y1=\"" + num(legend_y) +
           "\" x2=\"" + num(kWidth - 165) + "\" y2=\"" + num(legend_y) +
           "\" stroke=\"" + s.color + "\" stroke-width=\"2\"" +
           (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
    out += "<text x=\"" + num(kWidth - 158) + "\" y=\"" + num(legend_y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + s.label +
           "</text>\n";
    legend_y += 16;
  }
  out += "</svg>\n";
  return out;
}

std::string heatmap4(const std::string& title, const Ptm& m) {
  const char* row_labels[4] = {"I", "X", "Y", "Z"};
  const double cell = 70, x0 = 140, y0 = 70;
  std::string out = header(title);
  for (int i = 0; i < 4; ++i) {
    out += "<text x=\"" + num(x0 - 12) + "\" y=\"" +
           num(y0 + i * cell + cell / 2 + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"13\">" +
           row_labels[i] + "</text>\n";
    out += "<text x=\"" + num(x0 + i * cell + cell / 2) + "\" y=\"" +
           num(y0 - 10) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\">" +
           row_labels[i] + "</text>\n";
    for (int j = 0; j < 4; ++j) {
      const double v = std::max(-1.0, std::min(1.0, m(i, j)));
      const int shade = static_cast<int>(std::round(255 * (1 - std::abs(v))));
      char color[10];
      if (v >= 0)
        std::snprintf(color, sizeof(color), "#ff%02x%02x", shade, shade);
      else
        std::snprintf(color, sizeof(color), "#%02x%02xff", shade, shade);
      out += "<rect x=\"" + num(x0 + j * cell) + "\" y=\"" +
             num(y0 + i * cell) + "\" width=\"" + num(cell) + "\" height=\"" +
             num(cell) + "\" fill=\"" + color +
             "\" stroke=\"#888888\"/>\n";
      char label[32];
      std::snprintf(label, sizeof(label), "%.4f", m(i, j));
      out += "<text x=\"" + num(x0 + j * cell + cell / 2) + "\" y=\"" +
             num(y0 + i * cell + cell / 2 + 4) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"11\">" +
             label + "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

std::string bar_chart(const std::string& title,
                      const std::vector<std::string>& categories,
                      const std::vector<Series>& series, bool log_y) {
  double y_lo = 1e300, y_hi = -1e300;
  for (const auto& s : series)
    for (double v : s.y) {
      const double y = log_y ? std::max(v, 1e-9) : v;
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  if (y_lo >= y_hi) y_hi = y_lo + 1;
  if (!log_y) y_lo = std::min(0.0, y_lo);
  const Scale ys{log_y ? y_lo / 2 : y_lo, log_y ? y_hi * 2 : y_hi * 1.05,
                 log_y, kHeight - kBottom, kTop};

  const double span = kWidth - kLeft - kRight;
  const double group_w = span / categories.size();
  const double bar_w = group_w / (series.size() + 1);

  std::string out = header(title);
  const Scale xs{0, 1, false, kLeft, kWidth - kRight};
  out += axis_ticks(xs, ys, "", "");
  for (std::size_t c = 0; c < categories.size(); ++c) {
    out += "<text x=\"" + num(kLeft + c * group_w + group_w / 2) + "\" y=\"" +
           num(kHeight - kBottom + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">" +
           categories[c] + "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
      if (c >= series[s].y.size()) continue;
      const double v = log_y ? std::max(series[s].y[c], 1e-9) : series[s].y[c];
      const double x = kLeft + c * group_w + (s + 0.5) * bar_w;
      const double y_top = ys(v);
      const double y_base = ys(log_y ? ys.lo : 0.0);
      out += "<rect x=\"" + num(x) + "\" y=\"" + num(std::min(y_top, y_base)) +
             "\" width=\"" + num(bar_w * 0.9) + "\" height=\"" +
             num(std::abs(y_base - y_top)) + "\" fill=\"" + series[s].color +
             "\"/>\n";
    }
  }
  double legend_y = kTop + 6;
  for (const auto& s : series) {
    out += "<rect x=\"" + num(kWidth - 190) + "\" y=\"" + num(legend_y - 8) +
           "\" width=\"22\" height=\"10\" fill=\"" + s.color + "\"/>\n";
    out += "<text x=\"" + num(kWidth - 160) + "\" y=\"" + num(legend_y + 1) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + s.label +
           "</text>\n";
    legend_y += 16;
  }
  out += "</svg>\n";
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace pfrlab::svg
