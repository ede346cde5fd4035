#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ranlab/csv.hpp"

namespace ranlab {

// Just enough SVG to draw the report figures: axes with ticks, polylines,
// scatter markers, bars and labels. No plotting dependency, deterministic
// output bytes.
class SvgPlot {
 public:
  SvgPlot(double width, double height, std::string title)
      : width_(width), height_(height), title_(std::move(title)) {}

  void set_range(double x_min, double x_max, double y_min, double y_max) {
    x_min_ = x_min;
    x_max_ = x_max;
    y_min_ = y_min;
    y_max_ = y_max;
  }

  void set_labels(std::string x_label, std::string y_label) {
    x_label_ = std::move(x_label);
    y_label_ = std::move(y_label);
  }

  double px(double x) const {
    return margin_ + (x - x_min_) / (x_max_ - x_min_) * (width_ - 2 * margin_);
  }
  double py(double y) const {
    return height_ - margin_ -
           (y - y_min_) / (y_max_ - y_min_) * (height_ - 2 * margin_);
  }

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& color, double stroke_width = 1.5,
                bool dashed = false) {
    if (xs.size() != ys.size() || xs.empty()) return;
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) pts += ' ';
      pts += format_double(px(xs[i])) + ',' + format_double(py(ys[i]));
    }
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
             format_double(stroke_width) + "\"";
    if (dashed) body_ += " stroke-dasharray=\"6,4\"";
    body_ += " points=\"" + pts + "\"/>\n";
  }

  void scatter(const std::vector<double>& xs, const std::vector<double>& ys,
               const std::string& color, double radius = 3.0,
               bool filled = true) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      body_ += "<circle cx=\"" + format_double(px(xs[i])) + "\" cy=\"" +
               format_double(py(ys[i])) + "\" r=\"" + format_double(radius) +
               "\" stroke=\"" + color + "\" fill=\"" +
               (filled ? color : std::string("none")) + "\"/>\n";
    }
  }

  void bar(double x_center, double bar_width, double y_value,
           const std::string& color) {
    const double x0 = px(x_center) - bar_width / 2.0;
    const double y0 = py(std::max(0.0, y_value));
    const double h = std::abs(py(y_value) - py(0.0));
    body_ += "<rect x=\"" + format_double(x0) + "\" y=\"" + format_double(y0) +
             "\" width=\"" + format_double(bar_width) + "\" height=\"" +
             format_double(h) + "\" fill=\"" + color + "\"/>\n";
  }

  void text(double x, double y, const std::string& s, int size = 11,
            const std::string& anchor = "middle") {
    body_ += "<text x=\"" + format_double(px(x)) + "\" y=\"" +
             format_double(py(y)) + "\" font-size=\"" + std::to_string(size) +
             "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\">" +
             s + "</text>\n";
  }

  void legend(const std::vector<std::pair<std::string, std::string>>& entries) {
    double y = height_ - margin_ - 16.0;
    for (const auto& [label, color] : entries) {
      body_ += "<rect x=\"" + format_double(margin_ + 10.0) + "\" y=\"" +
               format_double(y) + "\" width=\"12\" height=\"12\" fill=\"" +
               color + "\"/>\n";
      body_ += "<text x=\"" + format_double(margin_ + 27.0) + "\" y=\"" +
               format_double(y + 10.0) +
               "\" font-size=\"11\" font-family=\"sans-serif\">" + label +
               "</text>\n";
      y -= 18.0;
    }
  }

  std::string render() const {
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           format_double(width_) + "\" height=\"" + format_double(height_) +
           "\" viewBox=\"0 0 " + format_double(width_) + " " +
           format_double(height_) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + format_double(width_ / 2.0) +
           "\" y=\"20\" font-size=\"14\" font-family=\"sans-serif\" "
           "text-anchor=\"middle\">" +
           title_ + "</text>\n";
    out += axes();
    out += body_;
    out += "</svg>\n";
    return out;
  }

  void save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << render();
  }

 private:
  static std::string nice_tick(double v) {
    const double r = std::round(v * 1000.0) / 1000.0;
    std::string s = format_double(r == 0.0 ? 0.0 : r);
    return s;
  }

  std::string axes() const {
    std::string out;
    const double x0 = margin_, x1 = width_ - margin_;
    const double y0 = height_ - margin_, y1 = margin_;
    out += "<line x1=\"" + format_double(x0) + "\" y1=\"" + format_double(y0) +
           "\" x2=\"" + format_double(x1) + "\" y2=\"" + format_double(y0) +
           "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + format_double(x0) + "\" y1=\"" + format_double(y0) +
           "\" x2=\"" + format_double(x0) + "\" y2=\"" + format_double(y1) +
           "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
      const double fx = x_min_ + (x_max_ - x_min_) * i / 5.0;
      const double fy = y_min_ + (y_max_ - y_min_) * i / 5.0;
      out += "<text x=\"" + format_double(px(fx)) + "\" y=\"" +
             format_double(y0 + 16.0) +
             "\" font-size=\"10\" font-family=\"sans-serif\" "
             "text-anchor=\"middle\">" +
             nice_tick(fx) + "</text>\n";
      out += "<text x=\"" + format_double(x0 - 6.0) + "\" y=\"" +
             format_double(py(fy) + 3.0) +
             "\" font-size=\"10\" font-family=\"sans-serif\" "
             "text-anchor=\"end\">" +
             nice_tick(fy) + "</text>\n";
    }
    out += "<text x=\"" + format_double((x0 + x1) / 2.0) + "\" y=\"" +
           format_double(height_ - 8.0) +
           "\" font-size=\"12\" font-family=\"sans-serif\" "
           "text-anchor=\"middle\">" +
           x_label_ + "</text>\n";
    out += "<text x=\"14\" y=\"" + format_double((y0 + y1) / 2.0) +
           "\" font-size=\"12\" font-family=\"sans-serif\" "
           "text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           format_double((y0 + y1) / 2.0) + ")\">" + y_label_ + "</text>\n";
    return out;
  }

  double width_;
  double height_;
  std::string title_;
  std::string x_label_;
  std::string y_label_;
  double x_min_ = 0.0, x_max_ = 1.0, y_min_ = 0.0, y_max_ = 1.0;
  double margin_ = 55.0;
  std::string body_;
};

}  // namespace ranlab
