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

#ifndef KS_KINEMATICS_HPP
#define KS_KINEMATICS_HPP

#include <span>
#include <string>
#include <vector>

#include "ks/core.hpp"
#include "ks/robot_model.hpp"

namespace ks {

/// Everything one forward pass produces: link poses, world-frame collision
/// spheres, tool poses, and the center of mass.
struct KinematicState {
  VecX q;
  std::vector<Pose> link_poses;
  std::vector<Vec3> sphere_centers;
  std::vector<Pose> tool_poses;
  Vec3 com = Vec3::Zero();
  double total_mass = 0.0;
};

/// Upstream gradient on one link: position part at the link origin, plus an
/// orientation part as a world-frame axis-angle tangent vector.
struct LinkGradient {
  Vec3 position = Vec3::Zero();
  Vec3 orientation = Vec3::Zero();

  bool zero() const { return position.isZero(0.0) && orientation.isZero(0.0); }
};

using Jacobian6 = Eigen::Matrix<double, 6, Eigen::Dynamic>;

inline KinematicState forward_kinematics(const RobotModel& model, const VecX& q,
                                         const Pose& base = Pose::Identity()) {
  KinematicState state;
  state.q = q;
  state.link_poses = detail::compute_link_poses(model, q, base);
  state.sphere_centers.resize(model.num_spheres());
  for (int s = 0; s < model.num_spheres(); ++s)
    state.sphere_centers[s] = state.link_poses[model.sphere_link[s]] * model.sphere_local[s];
  state.tool_poses.reserve(model.tool_link_indices.size());
  for (int idx : model.tool_link_indices) state.tool_poses.push_back(state.link_poses[idx]);
  Vec3 weighted = Vec3::Zero();
  double mass = 0.0;
  for (int l = 0; l < model.num_links(); ++l) {
    weighted += model.links[l].mass * (state.link_poses[l] * model.links[l].com);
    mass += model.links[l].mass;
  }
  state.total_mass = mass;
  state.com = mass > 0.0 ? Vec3(weighted / mass) : Vec3::Zero();
  return state;
}

inline std::vector<KinematicState> forward_kinematics(const RobotModel& model,
                                                      std::span<const VecX> q_batch,
                                                      const Pose& base = Pose::Identity()) {
  std::vector<KinematicState> out;
  out.reserve(q_batch.size());
  for (const VecX& q : q_batch) out.push_back(forward_kinematics(model, q, base));
  return out;
}

/// World joint axis of the joint driving `link`, and the joint origin. Valid
/// only for links with an articulated parent joint.
namespace detail {
inline Vec3 joint_world_axis(const RobotModel& model, const KinematicState& state, int link) {
  return state.link_poses[link].rotation * model.joints[model.parent_joint[link]].axis;
}
}  // namespace detail

/// Pull per-link gradients back to the actuated joints through the ancestor
/// chains of the topology cache. Mimic-driven links scale by their multiplier
/// and accumulate into the source joint.
inline VecX backprop_gradients(const RobotModel& model, const KinematicState& state,
                               std::span<const LinkGradient> link_grads) {
  if (static_cast<int>(link_grads.size()) != model.num_links())
    throw ValidationError("backprop_gradients: gradient list length mismatch");
  VecX out = VecX::Zero(model.dof);
  for (int link = 0; link < model.num_links(); ++link) {
    const LinkGradient& grad = link_grads[link];
    if (grad.zero()) continue;
    const Vec3 target_pos = state.link_poses[link].translation;
    for (int ancestor : model.cache.link_chain[link]) {
      const int joint = model.parent_joint[ancestor];
      if (joint < 0) continue;  // root
      const int a = model.joint_actuated[joint];
      if (a < 0) continue;  // fixed joint: no gradient sink
      const double mult = model.joint_multiplier[joint];
      const Vec3 axis = detail::joint_world_axis(model, state, ancestor);
      if (model.joints[joint].kind == JointKind::kRevolute) {
        const Vec3 arm = target_pos - state.link_poses[ancestor].translation;
        out[a] += mult * (grad.position.dot(axis.cross(arm)) + grad.orientation.dot(axis));
      } else {
        out[a] += mult * grad.position.dot(axis);
      }
    }
  }
  return out;
}

/// Fold a gradient on a world point rigidly attached to `link` into the
/// link's (position, orientation) gradient pair.
inline void accumulate_point_gradient(const KinematicState& state, int link, const Vec3& point,
                                      const Vec3& point_grad, std::vector<LinkGradient>& grads) {
  grads[link].position += point_grad;
  grads[link].orientation += (point - state.link_poses[link].translation).cross(point_grad);
}

/// 6×dof Jacobian of a target link, rows [linear; angular]. Columns are
/// exactly zero wherever the coarse affects[] filter says the joint cannot
/// move the target; the fine filter keeps only chain ancestors of the target
/// among a joint's driven links.
inline Jacobian6 jacobian(const RobotModel& model, const KinematicState& state,
                          const std::string& target) {
  const int target_link = model.link_index(target);
  if (target_link < 0) throw ValidationError("jacobian: unknown target link '" + target + "'");
  Jacobian6 jac = Jacobian6::Zero(6, model.dof);
  std::vector<char> in_chain(model.num_links(), 0);
  for (int l : model.cache.link_chain[target_link]) in_chain[l] = 1;
  const Vec3 target_pos = state.link_poses[target_link].translation;
  for (int a = 0; a < model.dof; ++a) {
    if (!model.cache.affects[a][target_link]) continue;
    for (int link : model.cache.connected_links[a]) {
      if (!in_chain[link]) continue;
      const int joint = model.parent_joint[link];
      const double mult = model.joint_multiplier[joint];
      const Vec3 axis = detail::joint_world_axis(model, state, link);
      if (model.joints[joint].kind == JointKind::kRevolute) {
        jac.col(a).head<3>() += mult * axis.cross(target_pos - state.link_poses[link].translation);
        jac.col(a).tail<3>() += mult * axis;
      } else {
        jac.col(a).head<3>() += mult * axis;
      }
    }
  }
  return jac;
}

}  // namespace ks

#endif  // KS_KINEMATICS_HPP
