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

#include <cmath>
#include <limits>

#include "decaylab/error.hpp"
#include "decaylab/interior.hpp"

namespace decaylab {

FitWindow default_fit_window(double total_time) { return {0.05 * total_time, total_time}; }

ExponentialFit fit_exponential(const SurvivalCurve& curve, FitWindow window) {
  if (!(window.t_max > window.t_min)) {
    throw Error(ErrorKind::invalid_input, "fit_exponential: degenerate window");
  }
  std::vector<double> ts;
  std::vector<double> ys;
  for (const auto& p : curve) {
    if (p.t < window.t_min || p.t > window.t_max) continue;
    if (!(p.mean > 0.0)) {
      throw Error(ErrorKind::invalid_input,
                  "fit_exponential: non-positive survival at t = " + std::to_string(p.t));
    }
    ts.push_back(p.t);
    ys.push_back(std::log(p.mean));
  }
  if (ts.size() < 3) {
    throw Error(ErrorKind::invalid_input, "fit_exponential: window holds fewer than 3 points");
  }

  const double n = static_cast<double>(ts.size());
  double t_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    t_mean += ts[i];
    y_mean += ys[i];
  }
  t_mean /= n;
  y_mean /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sxx += (ts[i] - t_mean) * (ts[i] - t_mean);
    sxy += (ts[i] - t_mean) * (ys[i] - y_mean);
  }
  const double slope = sxy / sxx;
  const double intercept = y_mean - slope * t_mean;
  double ss = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = ys[i] - (intercept + slope * ts[i]);
    ss += r * r;
  }

  ExponentialFit fit;
  fit.rate = slope == 0.0 ? 0.0 : -slope;
  fit.tau = slope == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / fit.rate;
  fit.rms_log_residual = std::sqrt(ss / n);
  fit.intercept = intercept;
  fit.window = window;
  fit.points = ts.size();
  return fit;
}

}  // namespace decaylab
