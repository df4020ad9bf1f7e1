#pragma once

// Minimal deterministic SVG writer: polylines, rectangles, axes with ticks,
// legends. No timestamps and no external plotting runtime.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "mht/config.hpp"  // fmt_double

namespace mht {

class SvgCanvas {
 public:
  SvgCanvas(double x_lo, double x_hi, double y_lo, double y_hi, bool log_y = false,
            int width = 720, int height = 480)
      : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi), log_y_(log_y), w_(width),
        h_(height) {
    if (log_y_) {
      y_lo_ = std::log10(std::max(y_lo_, 1e-12));
      y_hi_ = std::log10(std::max(y_hi_, 1e-12));
    }
    if (x_hi_ <= x_lo_) x_hi_ = x_lo_ + 1;
    if (y_hi_ <= y_lo_) y_hi_ = y_lo_ + 1;
  }

  double tx(double x) const {
    return ml_ + (x - x_lo_) / (x_hi_ - x_lo_) * (w_ - ml_ - mr_);
  }
  double ty(double y) const {
    if (log_y_) y = std::log10(std::max(y, 1e-12));
    return h_ - mb_ - (y - y_lo_) / (y_hi_ - y_lo_) * (h_ - mt_ - mb_);
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                double width = 1.2, const std::string& dash = "") {
    if (pts.size() < 2) return;
    std::ostringstream el;
    el << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width << "\"";
    if (!dash.empty()) el << " stroke-dasharray=\"" << dash << "\"";
    el << " points=\"";
    for (const auto& [x, y] : pts) el << svg_num(tx(x)) << "," << svg_num(ty(y)) << " ";
    el << "\"/>";
    body_.push_back(el.str());
  }

  void circle(double x, double y, double r, const std::string& color) {
    std::ostringstream el;
    el << "<circle cx=\"" << svg_num(tx(x)) << "\" cy=\"" << svg_num(ty(y)) << "\" r=\"" << r
       << "\" fill=\"" << color << "\"/>";
    body_.push_back(el.str());
  }

  /// Data-space rectangle (used for grid cells).
  void cell(double x0, double x1, double y0, double y1, const std::string& color) {
    std::ostringstream el;
    const double px = tx(x0), py = ty(y1);
    el << "<rect x=\"" << svg_num(px) << "\" y=\"" << svg_num(py) << "\" width=\""
       << svg_num(tx(x1) - px) << "\" height=\"" << svg_num(ty(y0) - py) << "\" fill=\"" << color
       << "\"/>";
    body_.push_back(el.str());
  }

  void text(double px, double py, const std::string& s, int size = 12,
            const std::string& anchor = "start") {
    std::ostringstream el;
    el << "<text x=\"" << svg_num(px) << "\" y=\"" << svg_num(py) << "\" font-size=\"" << size
       << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << escape(s)
       << "</text>";
    body_.push_back(el.str());
  }

  void axes(const std::string& xlabel, const std::string& ylabel, int nticks = 6) {
    std::ostringstream el;
    el << "<rect x=\"" << ml_ << "\" y=\"" << mt_ << "\" width=\"" << (w_ - ml_ - mr_)
       << "\" height=\"" << (h_ - mt_ - mb_) << "\" fill=\"none\" stroke=\"black\"/>";
    body_.push_back(el.str());
    for (int i = 0; i <= nticks; ++i) {
      const double fx = x_lo_ + (x_hi_ - x_lo_) * i / nticks;
      const double px = tx(fx);
      body_.push_back("<line x1=\"" + svg_num(px) + "\" y1=\"" + svg_num(h_ - mb_) + "\" x2=\"" +
                      svg_num(px) + "\" y2=\"" + svg_num(h_ - mb_ + 4) + "\" stroke=\"black\"/>");
      text(px, h_ - mb_ + 16, tick_label(fx), 10, "middle");

      const double fy = y_lo_ + (y_hi_ - y_lo_) * i / nticks;
      const double py = h_ - mb_ - (fy - y_lo_) / (y_hi_ - y_lo_) * (h_ - mt_ - mb_);
      body_.push_back("<line x1=\"" + svg_num(ml_ - 4) + "\" y1=\"" + svg_num(py) + "\" x2=\"" +
                      svg_num(ml_) + "\" y2=\"" + svg_num(py) + "\" stroke=\"black\"/>");
      text(ml_ - 6, py + 3, log_y_ ? ("1e" + tick_label(fy)) : tick_label(fy), 10, "end");
    }
    text((ml_ + w_ - mr_) / 2.0, h_ - 6, xlabel, 12, "middle");
    text(14, mt_ - 6, ylabel, 12, "start");
  }

  void legend(const std::vector<std::pair<std::string, std::string>>& items) {
    double y = mt_ + 14;
    for (const auto& [color, label] : items) {
      body_.push_back("<rect x=\"" + svg_num(w_ - mr_ + 6) + "\" y=\"" + svg_num(y - 9) +
                      "\" width=\"12\" height=\"12\" fill=\"" + color +
                      "\" stroke=\"black\" stroke-width=\"0.4\"/>");
      text(w_ - mr_ + 22, y + 1, label, 10);
      y += 16;
    }
  }

  void title(const std::string& s) { text(ml_, 16, s, 13); }

  std::string str() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
        << "\" viewBox=\"0 0 " << w_ << " " << h_ << "\">\n";
    out << "<rect width=\"" << w_ << "\" height=\"" << h_ << "\" fill=\"white\"/>\n";
    for (const auto& el : body_) out << el << "\n";
    out << "</svg>\n";
    return out.str();
  }

 private:
  static std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }
  static std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
  }
  static std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
      if (ch == '<') out += "&lt;";
      else if (ch == '>') out += "&gt;";
      else if (ch == '&') out += "&amp;";
      else out += ch;
    }
    return out;
  }

  double x_lo_, x_hi_, y_lo_, y_hi_;
  bool log_y_;
  int w_, h_;
  double ml_ = 56, mr_ = 170, mt_ = 28, mb_ = 40;
  std::vector<std::string> body_;
};

}  // namespace mht
