#pragma once

#include <string>
#include <vector>

#include "mediaflu/metrics.hpp"

namespace mediaflu {

// Minimal self-contained SVG charts on a fixed 800x600 viewBox. Output is a
// pure function of the inputs so it can be diffed across runs.
class SvgChart {
 public:
  enum class Marker { None, Dot, Cross };

  SvgChart(std::string title, std::string x_label, std::string y_label);

  void add_line(std::string name, std::vector<double> x, std::vector<double> y,
                std::string color, bool dashed = false);
  void add_points(std::string name, std::vector<double> x,
                  std::vector<double> y, std::string color,
                  Marker marker = Marker::Dot);
  // Categorical boxplots at x = 1..n labelled with the given names.
  void add_boxes(std::vector<std::string> labels,
                 std::vector<BoxplotSummary> boxes, std::string color);

  std::string render() const;

 private:
  struct Series {
    std::string name;
    std::vector<double> x, y;
    std::string color;
    bool line = true;
    bool dashed = false;
    Marker marker = Marker::None;
  };

  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
  std::vector<std::string> box_labels_;
  std::vector<BoxplotSummary> boxes_;
  std::string box_color_;
};

std::string svg_escape(const std::string& s);

}  // namespace mediaflu
