// Copyright 2026 The dprob Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPROB_SVG_HPP
#define DPROB_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace dprob::svg {

// Static charts, no dependencies. Good enough to eyeball a figure.

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

inline constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
inline const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

inline void pad(double& lo, double& hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double m = 0.05 * (hi - lo);
  lo -= m;
  hi += m;
}

inline void axes(std::ostringstream& os, const Frame& f, const std::string& title, const std::string& xlab,
                 const std::string& ylab) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
     << "</text>\n";
  const double bx = kLeft, by = kHeight - kBottom, tx = kWidth - kRight, ty = kTop;
  os << "<path d=\"M" << bx << ' ' << ty << " V" << by << " H" << tx << "\" stroke=\"black\" fill=\"none\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
    os << "<text x=\"" << bx - 6 << "\" y=\"" << f.py(yv) + 4 << "\" text-anchor=\"end\">" << num(yv) << "</text>\n";
  }
  os << "<text x=\"" << (bx + tx) / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">" << escape(xlab)
     << "</text>\n"
     << "<text transform=\"translate(16 " << (by + ty) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(ylab) << "</text>\n";
}

}  // namespace detail

inline std::string line_chart(const std::vector<Series>& series, const std::string& title, const std::string& xlab,
                              const std::string& ylab) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  detail::pad(x0, x1);
  detail::pad(y0, y1);
  const detail::Frame f{x0, x1, y0, y1};
  std::ostringstream os;
  detail::axes(os, f, title, xlab, ylab);
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    os << "<text x=\"" << f.px(xv) << "\" y=\"" << detail::kHeight - detail::kBottom + 16
       << "\" text-anchor=\"middle\">" << detail::num(xv) << "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = detail::kColors[k % std::size(detail::kColors)];
    const auto& s = series[k];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) os << f.px(s.x[i]) << ',' << f.py(s.y[i]) << ' ';
    os << "\"/>\n";
    const double ly = detail::kTop + 18.0 * static_cast<double>(k);
    os << "<rect x=\"" << detail::kWidth - detail::kRight + 12 << "\" y=\"" << ly << "\" width=\"12\" height=\"12\" fill=\""
       << color << "\"/><text x=\"" << detail::kWidth - detail::kRight + 30 << "\" y=\"" << ly + 10 << "\">"
       << detail::escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// One box per group: quartiles, whiskers at the extremes.
inline std::string box_chart(const std::vector<std::pair<std::string, std::vector<double>>>& groups,
                             const std::string& title, const std::string& ylab) {
  double y0 = std::numeric_limits<double>::infinity(), y1 = -y0;
  for (const auto& [name, v] : groups)
    for (double x : v)
      if (std::isfinite(x)) y0 = std::min(y0, x), y1 = std::max(y1, x);
  if (!std::isfinite(y0)) y0 = 0, y1 = 1;
  detail::pad(y0, y1);
  const double k = static_cast<double>(std::max<std::size_t>(groups.size(), 1));
  const detail::Frame f{0.0, k, y0, y1};
  std::ostringstream os;
  detail::axes(os, f, title, "", ylab);
  const auto quantile = [](std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<double> v;
    for (double x : groups[g].second)
      if (std::isfinite(x)) v.push_back(x);
    const double cx = f.px(static_cast<double>(g) + 0.5);
    os << "<text x=\"" << cx << "\" y=\"" << detail::kHeight - detail::kBottom + 16 << "\" text-anchor=\"middle\">"
       << detail::escape(groups[g].first) << "</text>\n";
    if (v.empty()) continue;
    const double q0 = quantile(v, 0), q1 = quantile(v, 0.25), q2 = quantile(v, 0.5), q3 = quantile(v, 0.75),
                 q4 = quantile(v, 1);
    const double hw = 0.3 * (f.px(1) - f.px(0));
    const char* color = detail::kColors[g % std::size(detail::kColors)];
    os << "<line x1=\"" << cx << "\" x2=\"" << cx << "\" y1=\"" << f.py(q0) << "\" y2=\"" << f.py(q4)
       << "\" stroke=\"black\"/>\n"
       << "<rect x=\"" << cx - hw << "\" y=\"" << f.py(q3) << "\" width=\"" << 2 * hw << "\" height=\""
       << f.py(q1) - f.py(q3) << "\" fill=\"" << color << "\" fill-opacity=\"0.4\" stroke=\"black\"/>\n"
       << "<line x1=\"" << cx - hw << "\" x2=\"" << cx + hw << "\" y1=\"" << f.py(q2) << "\" y2=\"" << f.py(q2)
       << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace dprob::svg

#endif  // DPROB_SVG_HPP
