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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>

#include "decaylab/error.hpp"
#include "decaylab/golden_rule.hpp"

namespace decaylab {
namespace {

constexpr int kMaxIterations = 200;
constexpr double kRelativeStep = 1e-10;

struct Params {
  double amplitude;
  double center;
  double fwhm;
};

double model_value(const Params& p, double e) {
  const double h = 0.5 * p.fwhm;
  return p.amplitude * h * h / ((e - p.center) * (e - p.center) + h * h);
}

double cost(const Params& p, std::span<const LinePoint> pts) {
  double s = 0.0;
  for (const auto& pt : pts) {
    const double r = pt.population - model_value(p, pt.energy);
    s += r * r;
  }
  return s;
}

// Linear interpolation of the half-maximum crossing walking away from `peak`.
std::optional<double> half_crossing(std::span<const LinePoint> pts, std::size_t peak, double half,
                                    int direction) {
  std::size_t i = peak;
  while (true) {
    if (direction < 0 && i == 0) return std::nullopt;
    if (direction > 0 && i + 1 >= pts.size()) return std::nullopt;
    const std::size_t j = direction < 0 ? i - 1 : i + 1;
    if (pts[j].population <= half) {
      const double y0 = pts[i].population;
      const double y1 = pts[j].population;
      const double frac = (y0 - half) / (y0 - y1);
      return pts[i].energy + frac * (pts[j].energy - pts[i].energy);
    }
    i = j;
  }
}

}  // namespace

LorentzianFit fit_lorentzian(std::span<const LinePoint> points) {
  if (points.size() < 5) throw Error(ErrorKind::invalid_input, "fit_lorentzian: need >= 5 points");
  std::size_t peak = 0;
  double low = points[0].population;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].population) || !std::isfinite(points[i].energy)) {
      throw Error(ErrorKind::invalid_input, "fit_lorentzian: non-finite input");
    }
    if (points[i].population > points[peak].population) peak = i;
    low = std::min(low, points[i].population);
  }
  const double top = points[peak].population;
  if (!(top > 0.0)) throw Error(ErrorKind::invalid_input, "fit_lorentzian: no positive peak");
  if (!(top > low)) throw Error(ErrorKind::invalid_input, "fit_lorentzian: flat input");

  const double half = 0.5 * top;
  const auto left = half_crossing(points, peak, half, -1);
  const auto right = half_crossing(points, peak, half, +1);
  double width;
  if (left && right) {
    width = *right - *left;
  } else if (left) {
    width = 2.0 * (points[peak].energy - *left);
  } else if (right) {
    width = 2.0 * (*right - points[peak].energy);
  } else {
    width = 0.5 * std::abs(points.back().energy - points.front().energy);
  }
  if (!(width > 0.0)) width = std::abs(points.back().energy - points.front().energy) / 10.0;

  Params p{top, points[peak].energy, width};
  double current = cost(p, points);
  double damping = 1e-3;
  const std::size_t n = points.size();

  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), 3);
    Eigen::VectorXd resid(static_cast<Eigen::Index>(n));
    const double h = 0.5 * p.fwhm;
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      const double x = points[i].energy - p.center;
      const double denom = x * x + h * h;
      jac(r, 0) = h * h / denom;
      jac(r, 1) = p.amplitude * h * h * 2.0 * x / (denom * denom);
      jac(r, 2) = p.amplitude * h * x * x / (denom * denom);
      resid(r) = points[i].population - model_value(p, points[i].energy);
    }
    const Eigen::Matrix3d normal = jac.transpose() * jac;
    const Eigen::Vector3d gradient = jac.transpose() * resid;

    // Raise the damping until a step lowers the cost.
    for (;;) {
      Eigen::Matrix3d damped = normal;
      for (int d = 0; d < 3; ++d) damped(d, d) += damping * std::max(normal(d, d), 1e-300);
      const Eigen::Vector3d step = damped.ldlt().solve(gradient);
      const Params trial{p.amplitude + step(0), p.center + step(1), p.fwhm + step(2)};
      const double trial_cost = cost(trial, points);
      const double scale = std::sqrt(p.amplitude * p.amplitude + p.center * p.center +
                                     p.fwhm * p.fwhm);
      const double relative = step.norm() / std::max(scale, 1e-300);
      if (std::isfinite(trial_cost) && trial_cost <= current) {
        p = trial;
        current = trial_cost;
        damping = std::max(damping / 10.0, 1e-12);
        if (relative < kRelativeStep) {
          return {p.center, std::abs(p.fwhm), p.amplitude, std::sqrt(current / static_cast<double>(n)),
                  iter};
        }
        break;
      }
      if (relative < kRelativeStep) {
        // No descent direction left at this resolution: at the minimum.
        return {p.center, std::abs(p.fwhm), p.amplitude, std::sqrt(current / static_cast<double>(n)),
                iter};
      }
      damping *= 10.0;
      if (damping > 1e16) {
        throw Error(ErrorKind::non_convergence, "fit_lorentzian: damping diverged");
      }
    }
  }
  throw Error(ErrorKind::non_convergence, "fit_lorentzian: no convergence in 200 iterations");
}

}  // namespace decaylab
