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

#ifndef KS_DYNAMICS_HPP
#define KS_DYNAMICS_HPP

#include <span>
#include <utility>
#include <vector>

#include "ks/core.hpp"
#include "ks/robot_model.hpp"

namespace ks {

// Spatial vectors are 6-vectors ordered [angular; linear] in link coordinates.

struct SpatialInertia {
  double mass = 0.0;
  Vec3 com = Vec3::Zero();
  Mat3 inertia_rot = Mat3::Zero();  // about com

  static SpatialInertia from_link(const LinkSpec& link) {
    return SpatialInertia{link.mass, link.com, link.inertia};
  }
};

struct RneaCache {
  std::vector<Vec6> v;           // spatial velocity per link
  std::vector<Vec6> a;           // spatial acceleration per link
  std::vector<Vec6> f;           // accumulated spatial force per link
  std::vector<Vec6> fext_local;  // external wrench rotated into the link frame
  int dof = 0;
};

struct RneaGradients {
  VecX q_bar, qd_bar, qdd_bar;
  std::vector<Vec6> fext_bar;  // world-aligned, matching the rnea input convention
};

namespace spatial {

/// Factored transform: child pose in parent coordinates.
struct Xform {
  Mat3 R;  // child axes in parent coordinates
  Vec3 p;  // child origin in parent coordinates
};

/// Motion vector from parent to child coordinates.
inline Vec6 motion_xform(const Xform& x, const Vec6& u) {
  Vec6 out;
  out.head<3>() = x.R.transpose() * u.head<3>();
  out.tail<3>() = x.R.transpose() * (u.tail<3>() + u.head<3>().cross(x.p));
  return out;
}

/// Force vector from child to parent coordinates.
inline Vec6 force_xform(const Xform& x, const Vec6& f) {
  Vec6 out;
  const Vec3 lin = x.R * f.tail<3>();
  out.head<3>() = x.R * f.head<3>() + x.p.cross(lin);
  out.tail<3>() = lin;
  return out;
}

/// Motion cross product crm(v)·u.
inline Vec6 crm(const Vec6& v, const Vec6& u) {
  Vec6 out;
  out.head<3>() = v.head<3>().cross(u.head<3>());
  out.tail<3>() = v.head<3>().cross(u.tail<3>()) + v.tail<3>().cross(u.head<3>());
  return out;
}

/// Force cross product crf(v)·f.
inline Vec6 crf(const Vec6& v, const Vec6& f) {
  Vec6 out;
  out.head<3>() = v.head<3>().cross(f.head<3>()) + v.tail<3>().cross(f.tail<3>());
  out.tail<3>() = v.head<3>().cross(f.tail<3>());
  return out;
}

/// Spatial inertia product I·v without forming the 6×6 matrix.
inline Vec6 apply_inertia(const SpatialInertia& inertia, const Vec6& v) {
  const Vec3 vcom = v.tail<3>() + v.head<3>().cross(inertia.com);
  Vec6 out;
  out.tail<3>() = inertia.mass * vcom;
  out.head<3>() = inertia.inertia_rot * v.head<3>() + inertia.com.cross(out.tail<3>());
  return out;
}

/// Joint motion subspace in child coordinates; zero for fixed joints.
inline Vec6 subspace(const JointSpec& joint) {
  Vec6 s = Vec6::Zero();
  if (joint.kind == JointKind::kRevolute)
    s.head<3>() = joint.axis;
  else if (joint.kind == JointKind::kPrismatic)
    s.tail<3>() = joint.axis;
  return s;
}

}  // namespace spatial

namespace detail {

struct RneaFrames {
  std::vector<spatial::Xform> x;       // local transform, child in parent
  std::vector<Mat3> world_rot;         // world rotation per link
  std::vector<Vec6> subspace;          // per link (from its parent joint)
  std::vector<double> qd_local;        // joint-local velocity (mimic-scaled)
  std::vector<double> qdd_local;
};

inline RneaFrames rnea_frames(const RobotModel& model, const VecX& q, const VecX& qd,
                              const VecX* qdd) {
  RneaFrames frames;
  const int n = model.num_links();
  frames.x.resize(n, spatial::Xform{Mat3::Identity(), Vec3::Zero()});
  frames.world_rot.resize(n, Mat3::Identity());
  frames.subspace.resize(n, Vec6::Zero());
  frames.qd_local.assign(n, 0.0);
  frames.qdd_local.assign(n, 0.0);
  for (int link = 0; link < n; ++link) {
    const int joint = model.parent_joint[link];
    if (joint < 0) continue;
    const int a = model.joint_actuated[joint];
    const double mult = model.joint_multiplier[joint];
    const double qj = a >= 0 ? mult * q[a] + model.joint_offset[joint] : 0.0;
    const Pose local = joint_transform(model.joints[joint], qj);
    frames.x[link] = spatial::Xform{local.rotation, local.translation};
    frames.world_rot[link] = frames.world_rot[model.parent_link[link]] * local.rotation;
    frames.subspace[link] = spatial::subspace(model.joints[joint]);
    if (a >= 0) {
      frames.qd_local[link] = mult * qd[a];
      if (qdd) frames.qdd_local[link] = mult * (*qdd)[a];
    }
  }
  return frames;
}

}  // namespace detail

/// Inverse dynamics. Propagates velocities and accelerations base-to-tips,
/// forms per-link forces, and accumulates them tips-to-base into joint
/// torques, with gravity entering as a virtual base acceleration. External
/// wrenches are world-aligned, applied at each link origin, and rotated into
/// the link frame before use. Returns torques plus the {v, a, f} cache the
/// adjoint pass consumes.
inline std::pair<VecX, RneaCache> rnea(const RobotModel& model, const VecX& q, const VecX& qd,
                                       const VecX& qdd, std::span<const Vec6> f_ext_world = {},
                                       const Vec3& gravity = Vec3(0.0, 0.0, -9.81)) {
  if (q.size() != model.dof || qd.size() != model.dof || qdd.size() != model.dof)
    throw ValidationError("rnea: dimension mismatch");
  if (!q.allFinite() || !qd.allFinite() || !qdd.allFinite())
    throw ValidationError("rnea: non-finite input");
  if (!f_ext_world.empty() && static_cast<int>(f_ext_world.size()) != model.num_links())
    throw ValidationError("rnea: f_ext must have one wrench per link");

  const int n = model.num_links();
  const detail::RneaFrames frames = detail::rnea_frames(model, q, qd, &qdd);

  RneaCache cache;
  cache.dof = model.dof;
  cache.v.assign(n, Vec6::Zero());
  cache.a.assign(n, Vec6::Zero());
  cache.f.assign(n, Vec6::Zero());
  cache.fext_local.assign(n, Vec6::Zero());

  Vec6 base_accel = Vec6::Zero();
  base_accel.tail<3>() = -gravity;

  for (int k = 0; k < n; ++k) {
    const int pa = model.parent_link[k];
    if (pa < 0) {
      cache.a[k] = base_accel;
      continue;
    }
    const Vec6& s = frames.subspace[k];
    cache.v[k] = spatial::motion_xform(frames.x[k], cache.v[pa]) + s * frames.qd_local[k];
    cache.a[k] = spatial::motion_xform(frames.x[k], cache.a[pa]) + s * frames.qdd_local[k] +
                 spatial::crm(cache.v[k], s * frames.qd_local[k]);
  }

  for (int k = 0; k < n; ++k) {
    if (model.parent_link[k] < 0) continue;
    const SpatialInertia inertia = SpatialInertia::from_link(model.links[k]);
    if (!f_ext_world.empty()) {
      const Mat3& w = frames.world_rot[k];
      cache.fext_local[k].head<3>() = w.transpose() * f_ext_world[k].head<3>();
      cache.fext_local[k].tail<3>() = w.transpose() * f_ext_world[k].tail<3>();
    }
    cache.f[k] = spatial::apply_inertia(inertia, cache.a[k]) +
                 spatial::crf(cache.v[k], spatial::apply_inertia(inertia, cache.v[k])) -
                 cache.fext_local[k];
  }

  VecX tau = VecX::Zero(model.dof);
  for (int k = n - 1; k >= 0; --k) {
    const int pa = model.parent_link[k];
    if (pa < 0) continue;
    const int joint = model.parent_joint[k];
    const int a = model.joint_actuated[joint];
    if (a >= 0 && model.joints[joint].kind != JointKind::kFixed)
      tau[a] += model.joint_multiplier[joint] * frames.subspace[k].dot(cache.f[k]);
    cache.f[pa] += spatial::force_xform(frames.x[k], cache.f[k]);
  }
  return {tau, cache};
}

/// Adjoint of rnea: gradients of ⟨tau_bar, τ⟩ with respect to q, q̇, q̈, and
/// the external wrenches, in O(links) time. The cache must come from rnea at
/// the same inputs.
inline RneaGradients rnea_vjp(const RobotModel& model, const VecX& q, const VecX& qd,
                              const VecX& tau_bar, const RneaCache& cache) {
  const int n = model.num_links();
  if (q.size() != model.dof || qd.size() != model.dof || tau_bar.size() != model.dof)
    throw ValidationError("rnea_vjp: dimension mismatch");
  if (cache.dof != model.dof || static_cast<int>(cache.v.size()) != n)
    throw ValidationError("rnea_vjp: stale cache");

  const detail::RneaFrames frames = detail::rnea_frames(model, q, qd, nullptr);

  RneaGradients grads;
  grads.q_bar = VecX::Zero(model.dof);
  grads.qd_bar = VecX::Zero(model.dof);
  grads.qdd_bar = VecX::Zero(model.dof);
  grads.fext_bar.assign(n, Vec6::Zero());

  // Adjoint of the force accumulation, base to tips.
  std::vector<Vec6> f_bar(n, Vec6::Zero());
  for (int k = 0; k < n; ++k) {
    const int pa = model.parent_link[k];
    if (pa < 0) continue;
    const int joint = model.parent_joint[k];
    const int a = model.joint_actuated[joint];
    const double mult = model.joint_multiplier[joint];
    const Vec6& s = frames.subspace[k];
    if (a >= 0) f_bar[k] = s * (mult * tau_bar[a]);
    const Vec6 xf = spatial::motion_xform(frames.x[k], f_bar[pa]);  // zero for root parents
    f_bar[k] += xf;
    if (a >= 0) grads.q_bar[a] += mult * xf.dot(spatial::crf(s, cache.f[k]));
  }

  // Adjoint of the external wrench, including the world-to-link rotation's
  // dependence on the ancestor joint angles (accumulated tips to base below).
  std::vector<Vec3> rot_accum(n, Vec3::Zero());
  for (int k = 0; k < n; ++k) {
    if (model.parent_link[k] < 0) continue;
    const Mat3& w = frames.world_rot[k];
    grads.fext_bar[k].head<3>() = w * (-f_bar[k].head<3>());
    grads.fext_bar[k].tail<3>() = w * (-f_bar[k].tail<3>());
    rot_accum[k] = cache.fext_local[k].head<3>().cross(f_bar[k].head<3>()) +
                   cache.fext_local[k].tail<3>().cross(f_bar[k].tail<3>());
  }

  // Adjoint of the velocity/acceleration propagation, tips to base.
  std::vector<Vec6> a_bar(n, Vec6::Zero());
  std::vector<Vec6> v_bar(n, Vec6::Zero());
  for (int k = n - 1; k >= 0; --k) {
    const int pa = model.parent_link[k];
    if (pa < 0) continue;
    const int joint = model.parent_joint[k];
    const int a = model.joint_actuated[joint];
    const double mult = model.joint_multiplier[joint];
    const Vec6& s = frames.subspace[k];
    const SpatialInertia inertia = SpatialInertia::from_link(model.links[k]);

    a_bar[k] += spatial::apply_inertia(inertia, f_bar[k]);
    v_bar[k] += -spatial::crf(f_bar[k], spatial::apply_inertia(inertia, cache.v[k])) -
                spatial::apply_inertia(inertia, spatial::crm(cache.v[k], f_bar[k])) +
                spatial::crf(s * frames.qd_local[k], a_bar[k]);

    if (a >= 0) {
      grads.qdd_bar[a] += mult * s.dot(a_bar[k]);
      grads.qd_bar[a] += mult * (s.dot(v_bar[k]) - s.dot(spatial::crf(cache.v[k], a_bar[k])));
      if (model.joints[joint].kind == JointKind::kRevolute)
        grads.q_bar[a] += mult * model.joints[joint].axis.dot(rot_accum[k]);
    }

    // cache.v[root] is zero and cache.a[root] holds the gravity pseudo-acceleration
    if (a >= 0) {
      grads.q_bar[a] -=
          mult * a_bar[k].dot(spatial::crm(s, spatial::motion_xform(frames.x[k], cache.a[pa])));
      grads.q_bar[a] -=
          mult * v_bar[k].dot(spatial::crm(s, spatial::motion_xform(frames.x[k], cache.v[pa])));
    }
    a_bar[pa] += spatial::force_xform(frames.x[k], a_bar[k]);
    v_bar[pa] += spatial::force_xform(frames.x[k], v_bar[k]);
    rot_accum[pa] += frames.x[k].R * rot_accum[k];
  }
  return grads;
}

/// Kinetic energy from cached spatial velocities, ½ Σ vᵀ I v.
inline double kinetic_energy(const RobotModel& model, const RneaCache& cache) {
  double energy = 0.0;
  for (int k = 0; k < model.num_links(); ++k) {
    if (model.parent_link[k] < 0) continue;
    energy += 0.5 * cache.v[k].dot(spatial::apply_inertia(SpatialInertia::from_link(model.links[k]),
                                                          cache.v[k]));
  }
  return energy;
}

}  // namespace ks

#endif  // KS_DYNAMICS_HPP
