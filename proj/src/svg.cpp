#include "mediaflu/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mediaflu/error.hpp"

namespace mediaflu {

namespace {

constexpr double kWidth = 800, kHeight = 600;
constexpr double kLeft = 80, kRight = 40, kTop = 50, kBottom = 70;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v, double step) {
  if (std::abs(v) < step * 1e-9) v = 0.0;
  char buf[32];
  const int digits = step >= 1 ? 0 : static_cast<int>(std::ceil(-std::log10(step)));
  std::snprintf(buf, sizeof buf, "%.*f", std::min(digits, 6), v);
  return buf;
}

double nice_step(double range) {
  if (!(range > 0)) return 1.0;
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1 : f < 3 ? 2 : f < 7 ? 5 : 10) * mag;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-12) {
      const double pad = std::max(std::abs(lo) * 0.1, 0.5);
      lo -= pad;
      hi += pad;
    }
  }
};

}  // namespace

std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

SvgChart::SvgChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)),
      x_label_(std::move(x_label)),
      y_label_(std::move(y_label)) {}

void SvgChart::add_line(std::string name, std::vector<double> x,
                        std::vector<double> y, std::string color, bool dashed) {
  if (x.size() != y.size())
    throw Error(ErrorKind::LengthMismatch, "line series lengths differ");
  series_.push_back({std::move(name), std::move(x), std::move(y),
                     std::move(color), true, dashed, Marker::None});
}

void SvgChart::add_points(std::string name, std::vector<double> x,
                          std::vector<double> y, std::string color,
                          Marker marker) {
  if (x.size() != y.size())
    throw Error(ErrorKind::LengthMismatch, "point series lengths differ");
  series_.push_back({std::move(name), std::move(x), std::move(y),
                     std::move(color), false, false, marker});
}

void SvgChart::add_boxes(std::vector<std::string> labels,
                         std::vector<BoxplotSummary> boxes, std::string color) {
  if (labels.size() != boxes.size())
    throw Error(ErrorKind::LengthMismatch, "one label per box required");
  box_labels_ = std::move(labels);
  boxes_ = std::move(boxes);
  box_color_ = std::move(color);
}

std::string SvgChart::render() const {
  Range xr, yr;
  for (const auto& s : series_) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  if (!boxes_.empty()) {
    xr.add(0.5);
    xr.add(static_cast<double>(boxes_.size()) + 0.5);
    for (const auto& b : boxes_) {
      yr.add(b.whisker_lo);
      yr.add(b.whisker_hi);
      for (double o : b.outliers) yr.add(o);
    }
  }
  xr.finish();
  yr.finish();
  const double xstep = nice_step(xr.hi - xr.lo);
  const double ystep = nice_step(yr.hi - yr.lo);
  if (boxes_.empty()) {
    xr.lo = std::floor(xr.lo / xstep) * xstep;
    xr.hi = std::ceil(xr.hi / xstep) * xstep;
  }
  yr.lo = std::floor(yr.lo / ystep) * ystep;
  yr.hi = std::ceil(yr.hi / ystep) * ystep;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) {
    return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph;
  };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
       "width=\"800\" height=\"600\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  o += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" +
       svg_escape(title_) + "</text>\n";

  // Axes and ticks.
  o += "<g stroke=\"#888\" stroke-width=\"1\">\n";
  o += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" +
       num(kLeft + pw) + "\" y2=\"" + num(kTop + ph) + "\"/>\n";
  o += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" +
       num(kLeft) + "\" y2=\"" + num(kTop + ph) + "\"/>\n";
  o += "</g>\n<g fill=\"#333\">\n";
  if (boxes_.empty()) {
    for (int i = 0; xr.lo + i * xstep <= xr.hi + xstep * 1e-9; ++i) {
      const double t = xr.lo + i * xstep;
      o += "<text x=\"" + num(px(t)) + "\" y=\"" + num(kTop + ph + 18) +
           "\" text-anchor=\"middle\">" + tick_label(t, xstep) + "</text>\n";
    }
  } else {
    for (std::size_t i = 0; i < box_labels_.size(); ++i) {
      o += "<text x=\"" + num(px(static_cast<double>(i + 1))) + "\" y=\"" +
           num(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
           svg_escape(box_labels_[i]) + "</text>\n";
    }
  }
  for (int i = 0; yr.lo + i * ystep <= yr.hi + ystep * 1e-9; ++i) {
    const double t = yr.lo + i * ystep;
    o += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(py(t) + 4) +
         "\" text-anchor=\"end\">" + tick_label(t, ystep) + "</text>\n";
  }
  o += "<text x=\"400\" y=\"" + num(kHeight - 20) +
       "\" text-anchor=\"middle\">" + svg_escape(x_label_) + "</text>\n";
  o += "<text x=\"20\" y=\"" + num(kTop + ph / 2) +
       "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
       num(kTop + ph / 2) + ")\">" + svg_escape(y_label_) + "</text>\n";
  o += "</g>\n";

  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    const BoxplotSummary& b = boxes_[i];
    const double cx = px(static_cast<double>(i + 1));
    const double hw = pw / static_cast<double>(boxes_.size()) * 0.2;
    o += "<g stroke=\"" + box_color_ + "\" fill=\"none\">\n";
    o += "<rect x=\"" + num(cx - hw) + "\" y=\"" + num(py(b.q3)) +
         "\" width=\"" + num(2 * hw) + "\" height=\"" +
         num(py(b.q1) - py(b.q3)) + "\"/>\n";
    o += "<line x1=\"" + num(cx - hw) + "\" y1=\"" + num(py(b.median)) +
         "\" x2=\"" + num(cx + hw) + "\" y2=\"" + num(py(b.median)) + "\"/>\n";
    o += "<line x1=\"" + num(cx) + "\" y1=\"" + num(py(b.q3)) + "\" x2=\"" +
         num(cx) + "\" y2=\"" + num(py(b.whisker_hi)) + "\"/>\n";
    o += "<line x1=\"" + num(cx) + "\" y1=\"" + num(py(b.q1)) + "\" x2=\"" +
         num(cx) + "\" y2=\"" + num(py(b.whisker_lo)) + "\"/>\n";
    for (double v : b.outliers) {
      const double y = py(v);
      o += "<path d=\"M" + num(cx - 4) + " " + num(y - 4) + "L" + num(cx + 4) +
           " " + num(y + 4) + "M" + num(cx - 4) + " " + num(y + 4) + "L" +
           num(cx + 4) + " " + num(y - 4) + "\"/>\n";
    }
    o += "</g>\n";
  }

  for (const auto& s : series_) {
    if (s.line) {
      std::string d;
      bool pen_down = false;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
          pen_down = false;
          continue;
        }
        d += (pen_down ? "L" : "M") + num(px(s.x[i])) + " " + num(py(s.y[i]));
        pen_down = true;
      }
      o += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + s.color +
           "\" stroke-width=\"2\"" +
           (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
    }
    if (s.marker == Marker::Dot) {
      o += "<g fill=\"" + s.color + "\">\n";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        o += "<circle cx=\"" + num(px(s.x[i])) + "\" cy=\"" + num(py(s.y[i])) +
             "\" r=\"3\"/>\n";
      }
      o += "</g>\n";
    } else if (s.marker == Marker::Cross) {
      o += "<g stroke=\"" + s.color + "\">\n";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        const double x = px(s.x[i]), y = py(s.y[i]);
        o += "<path d=\"M" + num(x - 3) + " " + num(y - 3) + "L" + num(x + 3) +
             " " + num(y + 3) + "M" + num(x - 3) + " " + num(y + 3) + "L" +
             num(x + 3) + " " + num(y - 3) + "\"/>\n";
      }
      o += "</g>\n";
    }
  }

  // Legend, top right.
  double ly = kTop + 10;
  for (const auto& s : series_) {
    if (s.name.empty()) continue;
    const double lx = kLeft + pw - 170;
    if (s.line) {
      o += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" +
           num(lx + 24) + "\" y2=\"" + num(ly) + "\" stroke=\"" + s.color +
           "\" stroke-width=\"2\"" +
           (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
    } else {
      o += "<circle cx=\"" + num(lx + 12) + "\" cy=\"" + num(ly) +
           "\" r=\"3\" fill=\"" + s.color + "\"/>\n";
    }
    o += "<text x=\"" + num(lx + 30) + "\" y=\"" + num(ly + 4) + "\">" +
         svg_escape(s.name) + "</text>\n";
    ly += 18;
  }
  o += "</svg>\n";
  return o;
}

}  // namespace mediaflu
