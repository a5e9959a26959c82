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

#ifndef KS_IK_HPP
#define KS_IK_HPP

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "ks/collision.hpp"
#include "ks/kinematics.hpp"
#include "ks/solvers.hpp"

namespace ks {

struct GoalSpec {
  std::string link;
  Pose target;
  double position_tol = 1e-3;     // meters
  double orientation_tol = 1e-2;  // radians
  double weight_pos = 1.0;
  double weight_rot = 0.5;
};

struct IkResult {
  VecX q;
  std::vector<double> position_error;     // per goal, meters
  std::vector<double> orientation_error;  // per goal, radians
  bool self_collision_free = false;
  bool scene_collision_free = false;
  bool converged = false;
  double total_error = kInf;  // summed weighted residual norm
};

struct IkConfig {
  LmConfig lm;
  LbfgsConfig lbfgs;
  double collision_margin = 0.025;
  double self_weight = 100.0;
  double scene_weight = 100.0;
  double limit_weight = 100.0;
  double feasible_penetration = 1e-3;  // 1 mm validation threshold
};

/// Weighted pose residual: [w_pos·(target - current position);
/// w_rot·axis-angle(target · currentᵀ)].
inline Vec6 pose_residual(const RobotModel& model, const KinematicState& state,
                          const GoalSpec& goal) {
  const int link = model.link_index(goal.link);
  if (link < 0) throw ValidationError("pose_residual: unknown link '" + goal.link + "'");
  const Pose& current = state.link_poses[link];
  Vec6 r;
  r.head<3>() = goal.weight_pos * (goal.target.translation - current.translation);
  r.tail<3>() =
      goal.weight_rot * rotation_log(goal.target.rotation * current.rotation.transpose());
  return r;
}

namespace ik_detail {

struct GoalErrors {
  std::vector<double> position, orientation;
  bool within_tolerance = true;
  double total = 0.0;
};

inline GoalErrors goal_errors(const RobotModel& model, const KinematicState& state,
                              std::span<const GoalSpec> goals) {
  GoalErrors errors;
  for (const GoalSpec& goal : goals) {
    const int link = model.link_index(goal.link);
    const Pose& current = state.link_poses[link];
    const double pos = (goal.target.translation - current.translation).norm();
    const double rot = rotation_log(goal.target.rotation * current.rotation.transpose()).norm();
    errors.position.push_back(pos);
    errors.orientation.push_back(rot);
    errors.total += goal.weight_pos * pos + goal.weight_rot * rot;
    if (pos > goal.position_tol || rot > goal.orientation_tol) errors.within_tolerance = false;
  }
  return errors;
}

/// Stacked residual and Gauss-Newton Jacobian over all goals.
inline std::pair<VecX, MatX> stacked_residual(const RobotModel& model,
                                              std::span<const GoalSpec> goals, const VecX& q) {
  const KinematicState state = forward_kinematics(model, q);
  VecX r(6 * goals.size());
  MatX jac(6 * goals.size(), model.dof);
  for (std::size_t g = 0; g < goals.size(); ++g) {
    r.segment<6>(6 * g) = pose_residual(model, state, goals[g]);
    const Jacobian6 link_jac = jacobian(model, state, goals[g].link);
    jac.block(6 * g, 0, 3, model.dof) = -goals[g].weight_pos * link_jac.topRows<3>();
    jac.block(6 * g + 3, 0, 3, model.dof) = -goals[g].weight_rot * link_jac.bottomRows<3>();
  }
  return {r, jac};
}

inline void fill_flags(const RobotModel& model, const DenseEsdf* world, const IkConfig& config,
                       IkResult& result) {
  const KinematicState state = forward_kinematics(model, result.q);
  const CollisionReport self = self_collision(model, state.sphere_centers,
                                              {config.collision_margin, 1024, false});
  result.self_collision_free = self.max_penetration <= config.feasible_penetration;
  if (world != nullptr) {
    const CollisionReport scene = scene_collision_static(
        *world, state.sphere_centers, model.sphere_radius, config.collision_margin);
    result.scene_collision_free = scene.max_penetration <= config.feasible_penetration;
  } else {
    result.scene_collision_free = true;
  }
}

}  // namespace ik_detail

/// Batched damped least-squares IK: one LM descent per seed on the stacked
/// pose residuals, joint limits enforced by projection after accepted steps.
/// Results are sorted by total weighted error. Goals outside the reachable
/// set produce converged = false with the best-effort configuration.
inline std::vector<IkResult> solve_ik(const RobotModel& model, std::span<const GoalSpec> goals,
                                      std::span<const VecX> seeds, const IkConfig& config = {},
                                      const DenseEsdf* world = nullptr) {
  if (goals.empty()) throw ValidationError("solve_ik: no goals");
  for (const GoalSpec& goal : goals)
    if (model.link_index(goal.link) < 0)
      throw ValidationError("solve_ik: unknown goal link '" + goal.link + "'");

  const ResidualFn residual_fn = [&](const VecX& q) {
    return ik_detail::stacked_residual(model, goals, q);
  };

  std::vector<IkResult> results;
  results.reserve(seeds.size());
  for (const VecX& seed : seeds) {
    VecX q = model.clamp_to_position_limits(seed);
    LmState state = lm_init(q, residual_fn, config.lm);
    for (int iter = 0; iter < config.lm.max_iters; ++iter) {
      const auto errors =
          ik_detail::goal_errors(model, forward_kinematics(model, state.q), goals);
      if (errors.within_tolerance) break;
      state = lm_step(state, residual_fn, config.lm);
      if (state.last_accepted) {
        const VecX clamped = model.clamp_to_position_limits(state.q);
        if ((clamped - state.q).norm() > 0.0) {
          state.q = clamped;
          auto [r, jac] = residual_fn(clamped);
          state.jacobian = jac;
          state.gradient = jac.transpose() * r;
          state.error = 0.5 * r.squaredNorm();
        }
      }
    }
    IkResult result;
    result.q = state.q;
    const auto errors = ik_detail::goal_errors(model, forward_kinematics(model, state.q), goals);
    result.position_error = errors.position;
    result.orientation_error = errors.orientation;
    result.converged = errors.within_tolerance;
    result.total_error = errors.total;
    ik_detail::fill_flags(model, world, config, result);
    results.push_back(std::move(result));
  }
  std::stable_sort(results.begin(), results.end(),
                   [](const IkResult& a, const IkResult& b) { return a.total_error < b.total_error; });
  return results;
}

/// Two-stage collision-free IK: LM converges to the pose without collision
/// terms, then L-BFGS refines each solution under self/scene collision and
/// joint-limit penalties. A refined solution replaces its stage-1 seed only
/// when it is feasible or strictly reduces the total penalty, and never at
/// the expense of an already-feasible solution's flags.
inline std::vector<IkResult> solve_ik_collision_free(const RobotModel& model,
                                                     std::span<const GoalSpec> goals,
                                                     std::span<const VecX> seeds,
                                                     const DenseEsdf* world,
                                                     const IkConfig& config = {}) {
  std::vector<IkResult> stage1 = solve_ik(model, goals, seeds, config, world);

  const auto penalty = [&](const VecX& q) -> std::pair<double, VecX> {
    const KinematicState state = forward_kinematics(model, q);
    double value = 0.0;
    std::vector<LinkGradient> link_grads(model.num_links());
    VecX direct = VecX::Zero(model.dof);

    for (const GoalSpec& goal : goals) {
      const int link = model.link_index(goal.link);
      const Pose& current = state.link_poses[link];
      const Vec3 dp = goal.target.translation - current.translation;
      const Vec3 aa = rotation_log(goal.target.rotation * current.rotation.transpose());
      value += goal.weight_pos * goal.weight_pos * dp.squaredNorm() +
               goal.weight_rot * goal.weight_rot * aa.squaredNorm();
      link_grads[link].position += -2.0 * goal.weight_pos * goal.weight_pos * dp;
      link_grads[link].orientation += -2.0 * goal.weight_rot * goal.weight_rot * aa;
    }

    const CollisionReport self = self_collision(model, state.sphere_centers,
                                                {config.collision_margin, 1024, false});
    value += config.self_weight * self.cost;
    for (int s = 0; s < model.num_spheres(); ++s) {
      if (!self.gradient[s].isZero(0.0))
        accumulate_point_gradient(state, model.sphere_link[s], state.sphere_centers[s],
                                  config.self_weight * self.gradient[s], link_grads);
    }
    if (world != nullptr) {
      const CollisionReport scene = scene_collision_static(
          *world, state.sphere_centers, model.sphere_radius, config.collision_margin);
      value += config.scene_weight * scene.cost;
      for (int s = 0; s < model.num_spheres(); ++s) {
        if (!scene.gradient[s].isZero(0.0))
          accumulate_point_gradient(state, model.sphere_link[s], state.sphere_centers[s],
                                    config.scene_weight * scene.gradient[s], link_grads);
      }
    }
    for (int a = 0; a < model.dof; ++a) {
      const Interval& lim = model.limit(a, 0);
      const double over = std::max(0.0, q[a] - lim.upper);
      const double under = std::max(0.0, lim.lower - q[a]);
      value += config.limit_weight * (over * over + under * under);
      direct[a] += config.limit_weight * 2.0 * (over - under);
    }
    return {value, backprop_gradients(model, state, link_grads) + direct};
  };

  std::vector<IkResult> refined;
  refined.reserve(stage1.size());
  for (IkResult& candidate : stage1) {
    const auto [initial_value, unused] = penalty(candidate.q);
    const LbfgsResult opt = lbfgs_minimize(penalty, candidate.q, config.lbfgs);
    IkResult result;
    result.q = model.clamp_to_position_limits(opt.q);
    const auto errors = ik_detail::goal_errors(model, forward_kinematics(model, result.q), goals);
    result.position_error = errors.position;
    result.orientation_error = errors.orientation;
    result.converged = errors.within_tolerance;
    result.total_error = errors.total;
    ik_detail::fill_flags(model, world, config, result);

    const bool candidate_feasible =
        candidate.converged && candidate.self_collision_free && candidate.scene_collision_free;
    const bool result_feasible =
        result.converged && result.self_collision_free && result.scene_collision_free;
    if (candidate_feasible && !result_feasible) {
      refined.push_back(candidate);  // never regress a feasible stage-1 solution
    } else if (result_feasible || opt.value < initial_value) {
      refined.push_back(std::move(result));
    } else {
      refined.push_back(candidate);
    }
  }
  std::stable_sort(refined.begin(), refined.end(), [](const IkResult& a, const IkResult& b) {
    const bool fa = a.converged && a.self_collision_free && a.scene_collision_free;
    const bool fb = b.converged && b.self_collision_free && b.scene_collision_free;
    if (fa != fb) return fa;
    return a.total_error < b.total_error;
  });
  return refined;
}

/// Deterministic seed bank: named configurations first, then Halton samples
/// of the position-limit box (range capped for unbounded joints).
inline std::vector<VecX> ik_seed_bank(const RobotModel& model, int count, std::uint64_t seed = 0) {
  std::vector<VecX> seeds;
  for (const auto& [name, q] : model.named_configurations) {
    seeds.push_back(q);
    if (static_cast<int>(seeds.size()) >= count) return seeds;
  }
  for (int s = 0; static_cast<int>(seeds.size()) < count; ++s) {
    VecX q(model.dof);
    for (int a = 0; a < model.dof; ++a) {
      const Interval& lim = model.limit(a, 0);
      const double lo = std::isfinite(lim.lower) ? lim.lower : -M_PI;
      const double hi = std::isfinite(lim.upper) ? lim.upper : M_PI;
      q[a] = lo + halton(seed + static_cast<std::uint64_t>(s), nth_prime(a)) * (hi - lo);
    }
    seeds.push_back(q);
  }
  return seeds;
}

}  // namespace ks

#endif  // KS_IK_HPP
