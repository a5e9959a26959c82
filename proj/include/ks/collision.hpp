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

#ifndef KS_COLLISION_HPP
#define KS_COLLISION_HPP

#include <span>
#include <vector>

#include "ks/core.hpp"
#include "ks/esdf.hpp"
#include "ks/robot_model.hpp"

namespace ks {

/// Smooth hinge on the signed clearance s = distance - radius with
/// activation margin ε: zero for s >= ε, quadratic blend down to s = 0,
/// linear below. C¹ everywhere.
inline double hinge_cost(double clearance, double margin) {
  if (clearance >= margin) return 0.0;
  if (clearance >= 0.0) {
    const double gap = margin - clearance;
    return gap * gap / (2.0 * margin);
  }
  return 0.5 * margin - clearance;
}

/// d hinge_cost / d clearance (non-positive).
inline double hinge_slope(double clearance, double margin) {
  if (clearance >= margin) return 0.0;
  if (clearance >= 0.0) return -(margin - clearance) / margin;
  return -1.0;
}

struct CollisionReport {
  double max_penetration = -kInf;  // <= 0 means free
  int worst_first = -1;            // sphere index (pair first / worst sphere)
  int worst_second = -1;           // pair second, -1 for scene checks
  double cost = 0.0;
  std::vector<Vec3> gradient;  // w.r.t. sphere centers
};

struct SelfCollisionConfig {
  double activation_margin = 0.025;
  int chunk_size = 1024;
  bool sum_over_pairs = false;  // default: most-penetrating pair only
};

/// Self-collision over the model's pruned sphere pairs via a two-stage
/// max-reduction: per-chunk maxima first, then a reduction across chunks.
/// Cost is the hinged clearance of the most-penetrating pair; its gradient
/// flows to that pair's two centers.
inline CollisionReport self_collision(const RobotModel& model, std::span<const Vec3> centers,
                                      const SelfCollisionConfig& config = {}) {
  if (static_cast<int>(centers.size()) != model.num_spheres())
    throw ValidationError("self_collision: sphere count mismatch");
  CollisionReport report;
  report.gradient.assign(centers.size(), Vec3::Zero());
  const auto& pairs = model.cache.self_collision_pairs;
  if (pairs.empty()) {
    report.max_penetration = 0.0;
    return report;
  }

  auto penetration_of = [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    return model.sphere_radius[i] + model.sphere_radius[j] - (centers[i] - centers[j]).norm();
  };

  // Stage 1: chunk maxima; stage 2: reduce across chunks. First occurrence
  // wins ties in both stages, matching a single left-to-right scan.
  std::size_t best_pair = 0;
  double best_pen = -kInf;
  const std::size_t chunk = std::max(1, config.chunk_size);
  for (std::size_t begin = 0; begin < pairs.size(); begin += chunk) {
    const std::size_t end = std::min(begin + chunk, pairs.size());
    std::size_t chunk_best = begin;
    double chunk_pen = -kInf;
    for (std::size_t p = begin; p < end; ++p) {
      const double pen = penetration_of(p);
      if (pen > chunk_pen) {
        chunk_pen = pen;
        chunk_best = p;
      }
    }
    if (chunk_pen > best_pen) {
      best_pen = chunk_pen;
      best_pair = chunk_best;
    }
  }

  report.max_penetration = best_pen;
  report.worst_first = pairs[best_pair].first;
  report.worst_second = pairs[best_pair].second;

  auto accumulate_pair = [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const Vec3 diff = centers[i] - centers[j];
    const double dist = diff.norm();
    const double clearance = dist - (model.sphere_radius[i] + model.sphere_radius[j]);
    const double cost = hinge_cost(clearance, config.activation_margin);
    report.cost += cost;
    if (cost > 0.0 && dist > 1e-12) {
      const Vec3 direction = diff / dist;
      const double slope = hinge_slope(clearance, config.activation_margin);
      report.gradient[i] += slope * direction;
      report.gradient[j] -= slope * direction;
    }
  };
  if (config.sum_over_pairs) {
    for (std::size_t p = 0; p < pairs.size(); ++p) accumulate_pair(p);
  } else {
    accumulate_pair(best_pair);
  }
  return report;
}

/// Single-configuration scene check: one ESDF query per sphere.
inline CollisionReport scene_collision_static(const DenseEsdf& esdf, std::span<const Vec3> centers,
                                              std::span<const double> radii,
                                              double activation_margin = 0.025) {
  if (centers.size() != radii.size())
    throw ValidationError("scene_collision: center/radius count mismatch");
  CollisionReport report;
  report.max_penetration = 0.0;
  report.gradient.assign(centers.size(), Vec3::Zero());
  for (std::size_t s = 0; s < centers.size(); ++s) {
    const EsdfSample sample = query(esdf, centers[s]);
    const double clearance = sample.distance - radii[s];
    const double pen = -clearance;
    if (pen > report.max_penetration) {
      report.max_penetration = pen;
      report.worst_first = static_cast<int>(s);
    }
    const double cost = hinge_cost(clearance, activation_margin);
    report.cost += cost;
    if (cost > 0.0)
      report.gradient[s] += hinge_slope(clearance, activation_margin) * sample.gradient;
  }
  return report;
}

struct SceneCollisionConfig {
  double activation_margin = 0.025;
  double dt = 1.0;          // sample spacing for the speed weighting
  int max_checks = 10000;   // safety cap per segment
};

/// One trajectory timestep of swept scene checking.
struct SceneTimestepReport {
  double max_penetration = -kInf;
  int worst_sphere = -1;
  double cost = 0.0;
  std::vector<Vec3> center_gradient;       // w.r.t. this timestep's centers
  std::vector<Vec3> next_center_gradient;  // w.r.t. the next timestep's centers
  std::vector<Vec3> velocity_gradient;     // w.r.t. this timestep's velocities
};

/// Swept-sphere collision along consecutive timesteps: starting at each
/// center, advance toward the next center in steps of
/// max(queried distance - radius, voxel) until the segment is covered,
/// hinging each check against the activation margin. Check costs are scaled
/// by the CHOMP speed weight |ẋ|·dt; check placement is held fixed in the
/// gradient while hinge values, ESDF gradients, and the speed weight are
/// differentiated exactly.
inline std::vector<SceneTimestepReport> scene_collision(
    const DenseEsdf& esdf, const std::vector<std::vector<Vec3>>& centers,
    std::span<const double> radii, const std::vector<std::vector<Vec3>>& velocities,
    const SceneCollisionConfig& config = {}) {
  if (!esdf.signs_recovered) throw ValidationError("scene_collision: esdf signs not recovered");
  if (centers.size() != velocities.size())
    throw ValidationError("scene_collision: centers/velocities timestep mismatch");
  const std::size_t num_spheres = radii.size();
  const double min_step = esdf.config.voxel_size;
  std::vector<SceneTimestepReport> reports(centers.size());

  for (std::size_t t = 0; t < centers.size(); ++t) {
    if (centers[t].size() != num_spheres || velocities[t].size() != num_spheres)
      throw ValidationError("scene_collision: sphere count mismatch at timestep");
    SceneTimestepReport& report = reports[t];
    report.center_gradient.assign(num_spheres, Vec3::Zero());
    report.velocity_gradient.assign(num_spheres, Vec3::Zero());
    const bool has_next = t + 1 < centers.size();
    if (has_next) report.next_center_gradient.assign(num_spheres, Vec3::Zero());
    report.max_penetration = 0.0;

    for (std::size_t s = 0; s < num_spheres; ++s) {
      const Vec3& start = centers[t][s];
      const Vec3 segment = has_next ? Vec3(centers[t + 1][s] - start) : Vec3::Zero();
      const double length = segment.norm();
      const double speed = velocities[t][s].norm();
      const double weight = speed * config.dt;

      double hinge_sum = 0.0;
      Vec3 start_grad = Vec3::Zero();
      Vec3 next_grad = Vec3::Zero();
      double lambda = 0.0;
      for (int check = 0; check < config.max_checks; ++check) {
        const double frac = length > 0.0 ? lambda / length : 0.0;
        const Vec3 x = start + frac * segment;
        const EsdfSample sample = query(esdf, x);
        const double clearance = sample.distance - radii[s];
        if (-clearance > report.max_penetration) {
          report.max_penetration = -clearance;
          report.worst_sphere = static_cast<int>(s);
        }
        hinge_sum += hinge_cost(clearance, config.activation_margin);
        const double slope = hinge_slope(clearance, config.activation_margin);
        if (slope != 0.0) {
          const Vec3 gx = slope * sample.gradient;
          start_grad += (1.0 - frac) * gx;
          next_grad += frac * gx;
        }
        if (!has_next) break;
        const double advance = std::max(clearance, min_step);
        lambda += advance;
        if (lambda >= length) break;
      }

      report.cost += weight * hinge_sum;
      report.center_gradient[s] += weight * start_grad;
      if (has_next) report.next_center_gradient[s] += weight * next_grad;
      if (speed > 1e-12)
        report.velocity_gradient[s] += hinge_sum * config.dt * (velocities[t][s] / speed);
    }
  }
  return reports;
}

}  // namespace ks

#endif  // KS_COLLISION_HPP
