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

#include <Eigen/LU>
#include <cmath>

#include "decaylab/error.hpp"
#include "decaylab/golden_rule.hpp"

namespace decaylab {
namespace {

constexpr double kMinRcond = 1e-12;
constexpr double kMaxResidual = 1e-10;

// ||x - e - G0 V x|| / ||x||
double defining_residual(const Eigen::VectorXcd& x, const Eigen::VectorXcd& rhs,
                         const Eigen::MatrixXcd& g0v) {
  return (x - rhs - g0v * x).norm() / x.norm();
}

}  // namespace

LippmannSchwingerKet lippmann_schwinger_solve(const ContinuumModel& model, std::size_t level,
                                              double epsilon) {
  if (level >= model.levels()) {
    throw Error(ErrorKind::invalid_input, "lippmann_schwinger_solve: level out of range");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorKind::invalid_input, "lippmann_schwinger_solve: epsilon must be positive");
  }
  const auto n = static_cast<Eigen::Index>(model.dim());
  const double energy = model.energies()[level];
  const Operator h0 = model.free_hamiltonian();
  const Operator v = model.interaction();

  // G0 is diagonal, so G0 V is V with row k scaled by 1/(E - E_k + i eps).
  Eigen::MatrixXcd g0v(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    const cplx g = 1.0 / (cplx(energy - h0(iu, iu).real(), epsilon));
    for (Eigen::Index j = 0; j < n; ++j) g0v(i, j) = g * v(iu, static_cast<std::size_t>(j));
  }
  const Eigen::MatrixXcd system = Eigen::MatrixXcd::Identity(n, n) - g0v;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  rhs(static_cast<Eigen::Index>(level) + 1) = 1.0;

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system);
  const double rcond = lu.rcond();
  if (!(rcond >= kMinRcond)) {
    throw Error(ErrorKind::conditioning, "lippmann_schwinger_solve: condition estimate " +
                                             std::to_string(1.0 / rcond) + " exceeds 1e12");
  }
  Eigen::VectorXcd x = lu.solve(rhs);
  double residual = defining_residual(x, rhs, g0v);
  if (residual > kMaxResidual) {
    // One step of iterative refinement.
    x += lu.solve(rhs - system * x);
    residual = defining_residual(x, rhs, g0v);
  }
  if (!(residual <= kMaxResidual)) {
    throw Error(ErrorKind::validation, "lippmann_schwinger_solve: residual " +
                                           std::to_string(residual) + " above 1e-10");
  }

  LippmannSchwingerKet out;
  out.ket.assign(x.data(), x.data() + n);
  out.residual = residual;
  out.rcond = rcond;
  return out;
}

}  // namespace decaylab
