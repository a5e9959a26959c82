// Copyright 2026 The ks Authors
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

#ifndef KS_SOLVERS_HPP
#define KS_SOLVERS_HPP

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <utility>

#include "ks/core.hpp"

namespace ks {

struct LmConfig {
  double lambda_init = 1e-3;
  double lambda_min = 1e-9;
  double lambda_max = 1e6;
  double gamma = 2.0;     // damping scale factor, > 1
  double rho_min = 1e-3;  // trust-ratio acceptance threshold
  double epsilon = 1e-12; // denominator guard
  int max_iters = 100;
  double position_tol = 1e-6;
  double orientation_tol = 1e-4;

  void validate() const {
    if (!(0.0 < lambda_min && lambda_min <= lambda_init && lambda_init <= lambda_max))
      throw ValidationError("lm: need 0 < lambda_min <= lambda_init <= lambda_max");
    if (gamma <= 1.0) throw ValidationError("lm: gamma must be > 1");
  }
};

/// Residual evaluation: r(q) and its Jacobian.
using ResidualFn = std::function<std::pair<VecX, MatX>(const VecX&)>;

struct LmState {
  VecX q;
  double lambda = 1e-3;
  MatX jacobian;
  VecX gradient;  // Jᵀr
  double error = 0.0;  // ½|r|²
  bool last_accepted = false;
  bool solve_failed = false;  // damped normal equations were singular
};

inline LmState lm_init(const VecX& q0, const ResidualFn& residual_fn, const LmConfig& config) {
  config.validate();
  LmState state;
  state.q = q0;
  state.lambda = config.lambda_init;
  auto [r, jac] = residual_fn(q0);
  state.jacobian = jac;
  state.gradient = jac.transpose() * r;
  state.error = 0.5 * r.squaredNorm();
  return state;
}

/// One damped Gauss-Newton step with trust-region ratio acceptance: solve
/// (JᵀJ + λI)δ = -g, measure ρ = (E - E⁺)/(½δᵀ(λδ - g) + ε), accept and
/// shrink λ when ρ ≥ ρ_min, otherwise reject and grow λ (both clamped).
inline LmState lm_step(const LmState& state, const ResidualFn& residual_fn,
                       const LmConfig& config) {
  config.validate();
  LmState next = state;
  const MatX hessian = state.jacobian.transpose() * state.jacobian;
  MatX damped = hessian;
  damped.diagonal().array() += state.lambda;
  Eigen::LLT<MatX> llt(damped);
  if (llt.info() != Eigen::Success) {
    next.lambda = std::clamp(state.lambda * config.gamma, config.lambda_min, config.lambda_max);
    next.last_accepted = false;
    next.solve_failed = true;
    return next;
  }
  next.solve_failed = false;
  const VecX delta = llt.solve(-state.gradient);
  const VecX q_new = state.q + delta;
  auto [r_new, jac_new] = residual_fn(q_new);
  const double error_new = 0.5 * r_new.squaredNorm();
  const double predicted = 0.5 * delta.dot(state.lambda * delta - state.gradient);
  const double rho_trust = (state.error - error_new) / (predicted + config.epsilon);
  if (rho_trust >= config.rho_min) {
    next.q = q_new;
    next.jacobian = jac_new;
    next.gradient = jac_new.transpose() * r_new;
    next.error = error_new;
    next.lambda = std::clamp(state.lambda / config.gamma, config.lambda_min, config.lambda_max);
    next.last_accepted = true;
  } else {
    next.lambda = std::clamp(state.lambda * config.gamma, config.lambda_min, config.lambda_max);
    next.last_accepted = false;
  }
  return next;
}

struct LbfgsConfig {
  int history = 10;
  int max_iters = 200;
  double armijo_c1 = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 40;
  double grad_tol = 1e-8;
};

/// Objective evaluation: value and gradient.
using ObjectiveFn = std::function<std::pair<double, VecX>(const VecX&)>;

struct LbfgsResult {
  VecX q;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// L-BFGS with two-loop recursion over `history` curvature pairs and Armijo
/// backtracking. Curvature pairs with non-positive sᵀy are discarded;
/// history = 0 degenerates to gradient descent with line search. Accepted
/// values are monotone non-increasing.
inline LbfgsResult lbfgs_minimize(const ObjectiveFn& objective, const VecX& q0,
                                  const LbfgsConfig& config = {}) {
  VecX q = q0;
  auto [f, g] = objective(q);
  if (!std::isfinite(f) || !g.allFinite())
    throw ValidationError("lbfgs: objective non-finite at the initial point");

  std::deque<std::pair<VecX, VecX>> pairs;  // (s, y)
  LbfgsResult result;
  for (int iter = 0; iter < config.max_iters; ++iter) {
    if (g.lpNorm<Eigen::Infinity>() < config.grad_tol) {
      result.converged = true;
      break;
    }

    // Two-loop recursion.
    VecX direction = -g;
    std::vector<double> alpha(pairs.size());
    for (int i = static_cast<int>(pairs.size()) - 1; i >= 0; --i) {
      const auto& [s, y] = pairs[i];
      const double rho = 1.0 / y.dot(s);
      alpha[i] = rho * s.dot(direction);
      direction -= alpha[i] * y;
    }
    if (!pairs.empty()) {
      const auto& [s, y] = pairs.back();
      direction *= s.dot(y) / y.dot(y);
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& [s, y] = pairs[i];
      const double rho = 1.0 / y.dot(s);
      const double beta = rho * y.dot(direction);
      direction += (alpha[i] - beta) * s;
    }

    double slope = g.dot(direction);
    if (slope >= 0.0) {  // bad curvature, fall back to steepest descent
      direction = -g;
      slope = -g.squaredNorm();
    }

    double step = 1.0;
    double f_new = f;
    VecX g_new;
    VecX q_new;
    bool accepted = false;
    for (int bt = 0; bt <= config.max_backtracks; ++bt) {
      q_new = q + step * direction;
      auto [f_try, g_try] = objective(q_new);
      if (std::isfinite(f_try) && f_try <= f + config.armijo_c1 * step * slope) {
        f_new = f_try;
        g_new = g_try;
        accepted = true;
        break;
      }
      step *= config.shrink;
    }
    ++result.iterations;
    if (!accepted) break;  // line search exhausted

    const VecX s = q_new - q;
    const VecX y = g_new - g;
    if (config.history > 0 && s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      pairs.emplace_back(s, y);
      while (static_cast<int>(pairs.size()) > config.history) pairs.pop_front();
    }
    q = q_new;
    f = f_new;
    g = g_new;
  }
  if (!result.converged && g.lpNorm<Eigen::Infinity>() < config.grad_tol) result.converged = true;
  result.q = q;
  result.value = f;
  return result;
}

}  // namespace ks

#endif  // KS_SOLVERS_HPP
