// Copyright 2026 The twospin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TWOSPIN_SVG_HPP_
#define TWOSPIN_SVG_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace twospin {

/// Minimal log-linear (linear x, log10 y) SVG plot: markers for data, polylines
/// for model curves. Output depends only on the inputs.
class SvgPlot {
 public:
  enum class Style { markers, line };

  struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
    Style style = Style::markers;
    std::string color = "#1f77b4";
  };

  SvgPlot(std::string title, std::string x_label, std::string y_label)
      : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

  void add(Series s) { series_.push_back(std::move(s)); }

  std::string render(int width = 640, int height = 420) const {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double ly0 = x0, ly1 = -x0;
    for (const auto& s : series_)
      for (const auto& [x, y] : s.points) {
        if (!(y > 0.0) || !std::isfinite(x)) continue;
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        ly0 = std::min(ly0, std::log10(y));
        ly1 = std::max(ly1, std::log10(y));
      }
    if (!std::isfinite(x0)) {
      x0 = 0.0; x1 = 1.0; ly0 = -1.0; ly1 = 0.0;
    }
    if (x1 <= x0) x1 = x0 + 1.0;
    ly0 = std::floor(ly0);
    ly1 = std::ceil(ly1);
    if (ly1 <= ly0) ly1 = ly0 + 1.0;

    const double left = 70, right = 20, top = 40, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (ly1 - std::log10(y)) / (ly1 - ly0) * ph; };

    std::string out;
    out += fmt("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
               "viewBox=\"0 0 %d %d\">\n", width, height, width, height);
    out += fmt("<rect x=\"0\" y=\"0\" width=\"%d\" height=\"%d\" fill=\"white\"/>\n", width, height);
    out += "<text x=\"" + num(width / 2.0) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
           escape(title_) + "</text>\n";
    out += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" +
           num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int k = 0; k <= 5; ++k) {
      const double x = x0 + (x1 - x0) * k / 5.0;
      out += "<line x1=\"" + num(px(x)) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(px(x)) +
             "\" y2=\"" + num(top + ph + 5) + "\" stroke=\"black\"/>\n";
      out += "<text x=\"" + num(px(x)) + "\" y=\"" + num(top + ph + 18) +
             "\" text-anchor=\"middle\" font-size=\"11\">" + tick(x) + "</text>\n";
    }
    for (int e = static_cast<int>(ly0); e <= static_cast<int>(ly1); ++e) {
      const double y = std::pow(10.0, e);
      out += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(py(y)) + "\" x2=\"" + num(left) +
             "\" y2=\"" + num(py(y)) + "\" stroke=\"black\"/>\n";
      out += "<text x=\"" + num(left - 8) + "\" y=\"" + num(py(y) + 4) +
             "\" text-anchor=\"end\" font-size=\"11\">1e" + std::to_string(e) + "</text>\n";
    }
    out += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(height - 10.0) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + escape(x_label_) + "</text>\n";
    out += "<text x=\"16\" y=\"" + num(top + ph / 2) + "\" text-anchor=\"middle\" font-size=\"12\" " +
           "transform=\"rotate(-90 16 " + num(top + ph / 2) + ")\">" + escape(y_label_) + "</text>\n";

    int legend_row = 0;
    for (const auto& s : series_) {
      if (s.style == Style::line) {
        std::string pts;
        for (const auto& [x, y] : s.points) {
          if (!(y > 0.0)) continue;
          if (!pts.empty()) pts += ' ';
          pts += num(px(x)) + "," + num(py(y));
        }
        out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"" + pts +
               "\"/>\n";
      } else {
        for (const auto& [x, y] : s.points) {
          if (!(y > 0.0)) continue;
          out += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) + "\" r=\"2.5\" fill=\"" +
                 s.color + "\"/>\n";
        }
      }
      const double ly = top + 14 + 14 * legend_row++;
      out += "<text x=\"" + num(left + pw - 8) + "\" y=\"" + num(ly) + "\" text-anchor=\"end\" " +
             "font-size=\"11\" fill=\"" + s.color + "\">" + escape(s.label) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
  }

 private:
  template <typename... Args>
  static std::string fmt(const char* f, Args... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
  }
  static std::string num(double v) { return fmt("%.2f", v); }
  static std::string tick(double v) { return fmt("%.3g", v); }
  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
      }
    }
    return out;
  }

  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
};

}  // namespace twospin

#endif  // TWOSPIN_SVG_HPP_
