// Copyright 2026 The decaylab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "decaylab/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "decaylab/error.hpp"

namespace decaylab {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr int kTicks = 5;

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
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

struct Axis {
  double lo;
  double hi;
  bool log;

  double map(double v) const {
    const double x = log ? std::log10(v) : v;
    return (x - lo) / (hi - lo);
  }
  double value_at(double frac) const {
    const double x = lo + frac * (hi - lo);
    return log ? std::pow(10.0, x) : x;
  }
};

Axis make_axis(const std::vector<PlotSeries>& series, bool use_y, bool log) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : series) {
    for (const double raw : use_y ? s.y : s.x) {
      const double v = log ? std::log10(raw) : raw;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) {
    lo -= 0.5;
    hi += 0.5;
  }
  return {lo, hi, log};
}

}  // namespace

std::string render_plot(const std::vector<PlotSeries>& series, const PlotOptions& options) {
  if (series.empty()) throw Error(ErrorKind::invalid_input, "plot: no series");
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size()) {
      throw Error(ErrorKind::invalid_input, "plot: series '" + s.name + "' is empty or ragged");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        throw Error(ErrorKind::invalid_input, "plot: series '" + s.name + "' has non-finite data");
      }
      if ((options.log_x && !(s.x[i] > 0.0)) || (options.log_y && !(s.y[i] > 0.0))) {
        throw Error(ErrorKind::invalid_input,
                    "plot: log axis needs positive data in series '" + s.name + "'");
      }
    }
  }
  const Axis xa = make_axis(series, false, options.log_x);
  const Axis ya = make_axis(series, true, options.log_y);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + xa.map(v) * pw; };
  auto py = [&](double v) { return kTop + (1.0 - ya.map(v)) * ph; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fixed(kWidth) +
         "\" height=\"" + fixed(kHeight) + "\" viewBox=\"0 0 " + fixed(kWidth) + " " +
         fixed(kHeight) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + fixed(kWidth) + "\" height=\"" + fixed(kHeight) +
         "\" fill=\"white\"/>\n";
  out += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  if (!options.title.empty()) {
    out += "<text x=\"" + fixed(kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
           escape(options.title) + "</text>\n";
  }
  out += "<rect x=\"" + fixed(kLeft) + "\" y=\"" + fixed(kTop) + "\" width=\"" + fixed(pw) +
         "\" height=\"" + fixed(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= kTicks; ++i) {
    const double frac = static_cast<double>(i) / kTicks;
    const double x = kLeft + frac * pw;
    const double y = kTop + (1.0 - frac) * ph;
    out += "<line x1=\"" + fixed(x) + "\" y1=\"" + fixed(kTop + ph) + "\" x2=\"" + fixed(x) +
           "\" y2=\"" + fixed(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(kTop + ph + 20) +
           "\" text-anchor=\"middle\">" + label(xa.value_at(frac)) + "</text>\n";
    out += "<line x1=\"" + fixed(kLeft - 5) + "\" y1=\"" + fixed(y) + "\" x2=\"" + fixed(kLeft) +
           "\" y2=\"" + fixed(y) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fixed(kLeft - 8) + "\" y=\"" + fixed(y + 4) +
           "\" text-anchor=\"end\">" + label(ya.value_at(frac)) + "</text>\n";
  }
  out += "<text x=\"" + fixed(kLeft + pw / 2) + "\" y=\"" + fixed(kHeight - 15) +
         "\" text-anchor=\"middle\">" + escape(options.x_label) + "</text>\n";
  out += "<text x=\"18\" y=\"" + fixed(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         fixed(kTop + ph / 2) + ")\">" + escape(options.y_label) + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i > 0) out += ' ';
      out += fixed(px(s.x[i])) + "," + fixed(py(s.y[i]));
    }
    out += "\"/>\n";
    const double ly = kTop + 10.0 + 20.0 * static_cast<double>(k);
    const double lx = kWidth - kRight + 15.0;
    out += "<line x1=\"" + fixed(lx) + "\" y1=\"" + fixed(ly) + "\" x2=\"" + fixed(lx + 25) +
           "\" y2=\"" + fixed(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fixed(lx + 32) + "\" y=\"" + fixed(ly + 4) + "\">" + escape(s.name) +
           "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

void emit_plot(const std::vector<PlotSeries>& series, const std::string& path,
               const PlotOptions& options) {
  const std::string svg = render_plot(series, options);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "plot: cannot open '" + path + "' for writing");
  out << svg;
  if (!out.flush()) throw Error(ErrorKind::io, "plot: write to '" + path + "' failed");
}

}  // namespace decaylab
