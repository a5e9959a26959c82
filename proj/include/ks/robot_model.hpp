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

#ifndef KS_ROBOT_MODEL_HPP
#define KS_ROBOT_MODEL_HPP

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ks/core.hpp"

namespace ks {

enum class JointKind { kRevolute, kPrismatic, kFixed };

struct MimicSpec {
  std::string source;
  double multiplier = 1.0;
  double offset = 0.0;
};

struct JointSpec {
  std::string name;
  JointKind kind = JointKind::kRevolute;
  Vec3 axis = Vec3::UnitZ();
  std::string parent_link;
  std::string child_link;
  Pose origin;
  Interval position_limits;
  Interval velocity_limits;
  Interval acceleration_limits;
  Interval jerk_limits;
  Interval torque_limits;
  std::optional<MimicSpec> mimic;
};

struct SphereSpec {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
};

struct LinkSpec {
  std::string name;
  double mass = 0.0;
  Vec3 com = Vec3::Zero();
  Mat3 inertia = Mat3::Zero();  // about com, link frame
  std::vector<SphereSpec> spheres;
};

/// Precomputed tree structure used by gradient backprop, Jacobians, and
/// self-collision. Immutable after construction.
struct TopologyCache {
  std::vector<std::vector<int>> link_chain;        // per link: root..link, inclusive
  std::vector<std::vector<char>> affects;          // [actuated joint][link]
  std::vector<std::vector<int>> connected_links;   // per actuated joint: driven links
  std::vector<int> joint_map;                      // per link: actuated joint index, -1 if none
  std::vector<std::vector<int>> level_order;       // links grouped by tree depth
  std::vector<std::pair<int, int>> self_collision_pairs;  // global sphere indices
};

struct RobotModel {
  std::vector<LinkSpec> links;  // topological order, root first
  std::vector<JointSpec> joints;
  int dof = 0;
  TopologyCache cache;
  std::vector<std::string> tool_links;
  std::map<std::string, VecX> named_configurations;

  // Derived wiring, filled by load_robot.
  std::vector<int> parent_link;        // per link, -1 for root
  std::vector<int> parent_joint;       // per link: joint whose child is this link, -1 for root
  std::vector<int> joint_parent_link;  // per joint
  std::vector<int> joint_child_link;   // per joint
  std::vector<int> actuated_joints;    // size dof, joint indices in declaration order
  std::vector<int> joint_actuated;     // per joint: actuated slot (own or mimic source), -1 fixed
  std::vector<double> joint_multiplier;  // per joint: mimic multiplier, 1 otherwise
  std::vector<double> joint_offset;      // per joint: mimic offset, 0 otherwise
  std::vector<int> rigid_group;          // per link: fixed-joint component id
  std::vector<int> sphere_link;          // flattened collision spheres
  std::vector<Vec3> sphere_local;
  std::vector<double> sphere_radius;
  std::vector<int> tool_link_indices;

  int num_links() const { return static_cast<int>(links.size()); }
  int num_joints() const { return static_cast<int>(joints.size()); }
  int num_spheres() const { return static_cast<int>(sphere_link.size()); }

  int link_index(const std::string& name) const {
    for (int i = 0; i < num_links(); ++i)
      if (links[i].name == name) return i;
    return -1;
  }
  int joint_index(const std::string& name) const {
    for (int i = 0; i < num_joints(); ++i)
      if (joints[i].name == name) return i;
    return -1;
  }

  /// Limit interval of an actuated joint for the given derivative order
  /// (0=position, 1=velocity, 2=acceleration, 3=jerk).
  const Interval& limit(int actuated, int order) const {
    const JointSpec& j = joints[actuated_joints[actuated]];
    switch (order) {
      case 0: return j.position_limits;
      case 1: return j.velocity_limits;
      case 2: return j.acceleration_limits;
      default: return j.jerk_limits;
    }
  }
  const Interval& torque_limit(int actuated) const {
    return joints[actuated_joints[actuated]].torque_limits;
  }

  VecX clamp_to_position_limits(VecX q) const {
    for (int a = 0; a < dof; ++a) q[a] = limit(a, 0).clamp(q[a]);
    return q;
  }
};

namespace detail {

inline void validate_inertial(const std::string& link_name, double mass, const Mat3& inertia) {
  if (mass < 0.0) throw ValidationError("link '" + link_name + "': negative mass");
  if ((inertia - inertia.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("link '" + link_name + "': inertia not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat3> eig(inertia);
  if (eig.eigenvalues().minCoeff() < -1e-9)
    throw ValidationError("link '" + link_name + "': inertia not positive semidefinite");
}

/// Local child-in-parent pose of a joint at joint value qj.
inline Pose joint_transform(const JointSpec& joint, double qj) {
  Pose motion;
  switch (joint.kind) {
    case JointKind::kRevolute:
      motion.rotation = axis_rotation(joint.axis, qj);
      break;
    case JointKind::kPrismatic:
      motion.translation = joint.axis * qj;
      break;
    case JointKind::kFixed:
      break;
  }
  return joint.origin * motion;
}

/// Link poses for a configuration, world-base composed in topological order.
/// Shared by kinematics and the self-collision pruning passes.
inline std::vector<Pose> compute_link_poses(const RobotModel& model, const VecX& q,
                                            const Pose& base = Pose::Identity()) {
  if (q.size() != model.dof) throw ValidationError("configuration size does not match dof");
  if (!q.allFinite()) throw ValidationError("non-finite joint configuration");
  std::vector<Pose> poses(model.links.size());
  for (int link = 0; link < model.num_links(); ++link) {
    if (model.parent_link[link] < 0) {
      poses[link] = base;
      continue;
    }
    const int joint = model.parent_joint[link];
    const int actuated = model.joint_actuated[joint];
    const double qj = actuated >= 0
                          ? model.joint_multiplier[joint] * q[actuated] + model.joint_offset[joint]
                          : 0.0;
    poses[link] = poses[model.parent_link[link]] * joint_transform(model.joints[joint], qj);
  }
  return poses;
}

inline std::vector<Vec3> sphere_centers_at(const RobotModel& model, const VecX& q) {
  const std::vector<Pose> poses = compute_link_poses(model, q);
  std::vector<Vec3> centers(model.sphere_link.size());
  for (std::size_t s = 0; s < centers.size(); ++s)
    centers[s] = poses[model.sphere_link[s]] * model.sphere_local[s];
  return centers;
}

inline bool spheres_adjacent(const RobotModel& model, int sphere_a, int sphere_b) {
  const int la = model.sphere_link[sphere_a];
  const int lb = model.sphere_link[sphere_b];
  if (la == lb) return true;
  const int ga = model.rigid_group[la];
  const int gb = model.rigid_group[lb];
  if (ga == gb) return true;
  // groups joined by a single articulated joint
  for (int j = 0; j < model.num_joints(); ++j) {
    if (model.joints[j].kind == JointKind::kFixed) continue;
    const int gp = model.rigid_group[model.joint_parent_link[j]];
    const int gc = model.rigid_group[model.joint_child_link[j]];
    if ((gp == ga && gc == gb) || (gp == gb && gc == ga)) return true;
  }
  return false;
}

}  // namespace detail

/// Parse and validate a robot description document (JSON, see README for the
/// schema). Rejects malformed documents and any type-invariant violation,
/// naming the offending element.
inline RobotModel load_robot(const std::string& document) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    throw ParseError(std::string("robot document parse failure: ") + e.what());
  }

  auto read_vec3 = [](const json& node, const std::string& where) -> Vec3 {
    if (!node.is_array() || node.size() != 3)
      throw ParseError(where + ": expected an array of 3 numbers");
    return Vec3(node[0].get<double>(), node[1].get<double>(), node[2].get<double>());
  };

  RobotModel model;
  if (!doc.contains("links") || !doc["links"].is_array() || doc["links"].empty())
    throw ValidationError("document has no links");

  for (const json& jl : doc["links"]) {
    LinkSpec link;
    link.name = jl.at("name").get<std::string>();
    if (model.link_index(link.name) >= 0)
      throw ValidationError("duplicate link name '" + link.name + "'");
    link.mass = jl.value("mass", 0.0);
    if (jl.contains("com")) link.com = read_vec3(jl["com"], "link '" + link.name + "' com");
    if (jl.contains("inertia")) {
      const json& ji = jl["inertia"];
      if (!ji.is_array() || ji.size() != 6)
        throw ParseError("link '" + link.name + "': inertia must be [ixx,iyy,izz,ixy,ixz,iyz]");
      const double ixx = ji[0], iyy = ji[1], izz = ji[2], ixy = ji[3], ixz = ji[4], iyz = ji[5];
      link.inertia << ixx, ixy, ixz, ixy, iyy, iyz, ixz, iyz, izz;
    }
    detail::validate_inertial(link.name, link.mass, link.inertia);
    if (jl.contains("spheres")) {
      for (const json& js : jl["spheres"]) {
        SphereSpec sphere;
        sphere.center = read_vec3(js.at("center"), "link '" + link.name + "' sphere center");
        sphere.radius = js.at("radius").get<double>();
        if (sphere.radius <= 0.0)
          throw ValidationError("link '" + link.name + "': sphere radius must be > 0");
        link.spheres.push_back(sphere);
      }
    }
    model.links.push_back(std::move(link));
  }

  auto read_interval = [](const json& node, bool pair_form,
                          const std::string& where) -> Interval {
    Interval out;
    if (pair_form) {
      if (!node.is_array() || node.size() != 2) throw ParseError(where + ": expected [lo, hi]");
      out.lower = node[0].get<double>();
      out.upper = node[1].get<double>();
    } else {
      const double v = node.get<double>();
      out.lower = -v;
      out.upper = v;
    }
    return out;
  };

  if (doc.contains("joints")) {
    for (const json& jj : doc["joints"]) {
      JointSpec joint;
      joint.name = jj.at("name").get<std::string>();
      if (model.joint_index(joint.name) >= 0)
        throw ValidationError("duplicate joint name '" + joint.name + "'");
      const std::string kind = jj.at("kind").get<std::string>();
      if (kind == "revolute")
        joint.kind = JointKind::kRevolute;
      else if (kind == "prismatic")
        joint.kind = JointKind::kPrismatic;
      else if (kind == "fixed")
        joint.kind = JointKind::kFixed;
      else
        throw ValidationError("joint '" + joint.name + "': unknown kind '" + kind + "'");
      joint.parent_link = jj.at("parent").get<std::string>();
      joint.child_link = jj.at("child").get<std::string>();
      if (jj.contains("axis")) joint.axis = read_vec3(jj["axis"], "joint '" + joint.name + "' axis");
      if (joint.kind != JointKind::kFixed && std::abs(joint.axis.norm() - 1.0) > 1e-9)
        throw ValidationError("joint '" + joint.name + "': axis must have unit norm");
      if (jj.contains("origin")) {
        const json& jo = jj["origin"];
        if (jo.contains("xyz"))
          joint.origin.translation = read_vec3(jo["xyz"], "joint '" + joint.name + "' origin");
        if (jo.contains("rpy")) {
          const Vec3 rpy = read_vec3(jo["rpy"], "joint '" + joint.name + "' rpy");
          joint.origin.rotation = rpy_to_matrix(rpy.x(), rpy.y(), rpy.z());
        }
      }
      if (jj.contains("limits")) {
        const json& lim = jj["limits"];
        const std::string where = "joint '" + joint.name + "' limits";
        if (lim.contains("position")) joint.position_limits = read_interval(lim["position"], true, where);
        if (lim.contains("velocity")) joint.velocity_limits = read_interval(lim["velocity"], false, where);
        if (lim.contains("acceleration"))
          joint.acceleration_limits = read_interval(lim["acceleration"], false, where);
        if (lim.contains("jerk")) joint.jerk_limits = read_interval(lim["jerk"], false, where);
        if (lim.contains("torque")) joint.torque_limits = read_interval(lim["torque"], false, where);
      }
      for (const Interval* iv : {&joint.position_limits, &joint.velocity_limits,
                                 &joint.acceleration_limits, &joint.jerk_limits,
                                 &joint.torque_limits}) {
        if (iv->empty())
          throw ValidationError("joint '" + joint.name + "': empty limit interval");
      }
      if (jj.contains("mimic")) {
        MimicSpec mimic;
        mimic.source = jj["mimic"].at("source").get<std::string>();
        mimic.multiplier = jj["mimic"].value("multiplier", 1.0);
        mimic.offset = jj["mimic"].value("offset", 0.0);
        joint.mimic = mimic;
        if (joint.kind == JointKind::kFixed)
          throw ValidationError("joint '" + joint.name + "': fixed joints cannot mimic");
      }
      model.joints.push_back(std::move(joint));
    }
  }

  // Tree wiring and validation.
  const int num_links = model.num_links();
  const int num_joints = model.num_joints();
  std::vector<int> parent_joint_of(num_links, -1);
  model.joint_parent_link.resize(num_joints);
  model.joint_child_link.resize(num_joints);
  for (int j = 0; j < num_joints; ++j) {
    const JointSpec& joint = model.joints[j];
    const int parent = model.link_index(joint.parent_link);
    const int child = model.link_index(joint.child_link);
    if (parent < 0)
      throw ValidationError("joint '" + joint.name + "': undeclared parent link '" +
                            joint.parent_link + "'");
    if (child < 0)
      throw ValidationError("joint '" + joint.name + "': undeclared child link '" +
                            joint.child_link + "'");
    if (parent == child)
      throw ValidationError("joint '" + joint.name + "': parent equals child");
    if (parent_joint_of[child] >= 0)
      throw ValidationError("cycle: link '" + joint.child_link +
                            "' has multiple parent joints ('" +
                            model.joints[parent_joint_of[child]].name + "', '" + joint.name + "')");
    parent_joint_of[child] = j;
    model.joint_parent_link[j] = parent;
    model.joint_child_link[j] = child;
  }

  int root = -1;
  for (int l = 0; l < num_links; ++l) {
    if (parent_joint_of[l] < 0) {
      if (root >= 0)
        throw ValidationError("multiple root links: '" + model.links[root].name + "' and '" +
                              model.links[l].name + "'");
      root = l;
    }
  }
  if (root < 0) throw ValidationError("cycle: no root link (every link has a parent joint)");

  // BFS from the root: unreached links sit on a cycle or a detached island.
  std::vector<int> order;
  order.reserve(num_links);
  std::vector<char> reached(num_links, 0);
  order.push_back(root);
  reached[root] = 1;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (int j = 0; j < num_joints; ++j) {
      if (model.joint_parent_link[j] == order[head] && !reached[model.joint_child_link[j]]) {
        reached[model.joint_child_link[j]] = 1;
        order.push_back(model.joint_child_link[j]);
      }
    }
  }
  for (int l = 0; l < num_links; ++l)
    if (!reached[l])
      throw ValidationError("cycle: link '" + model.links[l].name +
                            "' is not reachable from the root");

  // Reorder links topologically (BFS order) and remap joint endpoints.
  std::vector<int> new_index(num_links);
  for (int i = 0; i < num_links; ++i) new_index[order[i]] = i;
  std::vector<LinkSpec> sorted_links(num_links);
  for (int i = 0; i < num_links; ++i) sorted_links[i] = std::move(model.links[order[i]]);
  model.links = std::move(sorted_links);
  for (int j = 0; j < num_joints; ++j) {
    model.joint_parent_link[j] = new_index[model.joint_parent_link[j]];
    model.joint_child_link[j] = new_index[model.joint_child_link[j]];
  }
  model.parent_joint.assign(num_links, -1);
  model.parent_link.assign(num_links, -1);
  for (int j = 0; j < num_joints; ++j) {
    model.parent_joint[model.joint_child_link[j]] = j;
    model.parent_link[model.joint_child_link[j]] = model.joint_parent_link[j];
  }

  // Actuation map. Mimic sources must be actuated (not fixed, not mimic).
  model.joint_actuated.assign(num_joints, -1);
  model.joint_multiplier.assign(num_joints, 1.0);
  model.joint_offset.assign(num_joints, 0.0);
  for (int j = 0; j < num_joints; ++j) {
    const JointSpec& joint = model.joints[j];
    if (joint.kind == JointKind::kFixed || joint.mimic) continue;
    model.joint_actuated[j] = static_cast<int>(model.actuated_joints.size());
    model.actuated_joints.push_back(j);
  }
  model.dof = static_cast<int>(model.actuated_joints.size());
  for (int j = 0; j < num_joints; ++j) {
    const JointSpec& joint = model.joints[j];
    if (!joint.mimic) continue;
    const int src = model.joint_index(joint.mimic->source);
    if (src < 0)
      throw ValidationError("joint '" + joint.name + "': mimic source '" + joint.mimic->source +
                            "' does not exist");
    if (model.joints[src].kind == JointKind::kFixed || model.joints[src].mimic ||
        model.joint_actuated[src] < 0)
      throw ValidationError("joint '" + joint.name +
                            "': mimic source must be an actuated joint (no fixed sources, no "
                            "mimic chains)");
    model.joint_actuated[j] = model.joint_actuated[src];
    model.joint_multiplier[j] = joint.mimic->multiplier;
    model.joint_offset[j] = joint.mimic->offset;
  }

  // Rigid groups across fixed joints (adjacency definition for self-collision).
  model.rigid_group.resize(num_links);
  for (int l = 0; l < num_links; ++l) model.rigid_group[l] = l;
  for (int l = 0; l < num_links; ++l) {  // topological order: parent group already final
    const int j = model.parent_joint[l];
    if (j >= 0 && model.joints[j].kind == JointKind::kFixed)
      model.rigid_group[l] = model.rigid_group[model.parent_link[l]];
  }

  // Flatten collision spheres.
  for (int l = 0; l < num_links; ++l) {
    for (const SphereSpec& sphere : model.links[l].spheres) {
      model.sphere_link.push_back(l);
      model.sphere_local.push_back(sphere.center);
      model.sphere_radius.push_back(sphere.radius);
    }
  }

  if (doc.contains("tool_links")) {
    for (const json& jt : doc["tool_links"]) {
      const std::string name = jt.get<std::string>();
      const int idx = model.link_index(name);
      if (idx < 0) throw ValidationError("tool link '" + name + "' does not exist");
      model.tool_links.push_back(name);
      model.tool_link_indices.push_back(idx);
    }
  }

  if (doc.contains("configurations")) {
    for (auto it = doc["configurations"].begin(); it != doc["configurations"].end(); ++it) {
      const json& values = it.value();
      if (!values.is_array() || static_cast<int>(values.size()) != model.dof)
        throw ValidationError("configuration '" + it.key() + "' must have " +
                              std::to_string(model.dof) + " entries");
      VecX q(model.dof);
      for (int i = 0; i < model.dof; ++i) q[i] = values[i].get<double>();
      model.named_configurations[it.key()] = q;
    }
  }

  // Topology cache.
  TopologyCache& cache = model.cache;
  cache.link_chain.resize(num_links);
  for (int l = 0; l < num_links; ++l) {
    std::vector<int> chain;
    for (int cur = l; cur >= 0; cur = model.parent_link[cur]) chain.push_back(cur);
    std::reverse(chain.begin(), chain.end());
    cache.link_chain[l] = std::move(chain);
  }
  cache.joint_map.resize(num_links);
  for (int l = 0; l < num_links; ++l) {
    const int j = model.parent_joint[l];
    cache.joint_map[l] = j >= 0 ? model.joint_actuated[j] : -1;
  }
  cache.connected_links.assign(model.dof, {});
  for (int j = 0; j < num_joints; ++j) {
    const int a = model.joint_actuated[j];
    if (a >= 0) cache.connected_links[a].push_back(model.joint_child_link[j]);
  }
  cache.affects.assign(model.dof, std::vector<char>(num_links, 0));
  for (int a = 0; a < model.dof; ++a) {
    for (int e = 0; e < num_links; ++e) {
      for (int driven : cache.connected_links[a]) {
        const std::vector<int>& chain = cache.link_chain[e];
        if (std::find(chain.begin(), chain.end(), driven) != chain.end()) {
          cache.affects[a][e] = 1;
          break;
        }
      }
    }
  }
  std::vector<int> depth(num_links, 0);
  int max_depth = 0;
  for (int l = 0; l < num_links; ++l) {
    depth[l] = static_cast<int>(cache.link_chain[l].size()) - 1;
    max_depth = std::max(max_depth, depth[l]);
  }
  cache.level_order.assign(max_depth + 1, {});
  for (int l = 0; l < num_links; ++l) cache.level_order[depth[l]].push_back(l);

  // Initial pair set: everything except same-link and neighbor pairs. The
  // retract and sampling pruning passes live in build_self_collision_pairs.
  const int ns = model.num_spheres();
  for (int i = 0; i < ns; ++i)
    for (int k = i + 1; k < ns; ++k)
      if (!detail::spheres_adjacent(model, i, k)) cache.self_collision_pairs.emplace_back(i, k);

  return model;
}

/// Serialize back to the document schema; load_robot(serialize(m)) round-trips.
inline std::string serialize(const RobotModel& model) {
  using nlohmann::json;
  json doc;
  doc["links"] = json::array();
  for (const LinkSpec& link : model.links) {
    json jl;
    jl["name"] = link.name;
    jl["mass"] = link.mass;
    jl["com"] = {link.com.x(), link.com.y(), link.com.z()};
    jl["inertia"] = {link.inertia(0, 0), link.inertia(1, 1), link.inertia(2, 2),
                     link.inertia(0, 1), link.inertia(0, 2), link.inertia(1, 2)};
    if (!link.spheres.empty()) {
      jl["spheres"] = json::array();
      for (const SphereSpec& s : link.spheres)
        jl["spheres"].push_back(
            {{"center", {s.center.x(), s.center.y(), s.center.z()}}, {"radius", s.radius}});
    }
    doc["links"].push_back(jl);
  }
  doc["joints"] = json::array();
  for (const JointSpec& joint : model.joints) {
    json jj;
    jj["name"] = joint.name;
    jj["kind"] = joint.kind == JointKind::kRevolute    ? "revolute"
                 : joint.kind == JointKind::kPrismatic ? "prismatic"
                                                       : "fixed";
    jj["parent"] = joint.parent_link;
    jj["child"] = joint.child_link;
    jj["axis"] = {joint.axis.x(), joint.axis.y(), joint.axis.z()};
    const Mat3& r = joint.origin.rotation;
    const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
    const double roll = std::atan2(r(2, 1), r(2, 2));
    const double yaw = std::atan2(r(1, 0), r(0, 0));
    jj["origin"] = {{"xyz",
                     {joint.origin.translation.x(), joint.origin.translation.y(),
                      joint.origin.translation.z()}},
                    {"rpy", {roll, pitch, yaw}}};
    json lim = json::object();
    if (joint.position_limits.is_finite())
      lim["position"] = {joint.position_limits.lower, joint.position_limits.upper};
    if (joint.velocity_limits.is_finite()) lim["velocity"] = joint.velocity_limits.upper;
    if (joint.acceleration_limits.is_finite())
      lim["acceleration"] = joint.acceleration_limits.upper;
    if (joint.jerk_limits.is_finite()) lim["jerk"] = joint.jerk_limits.upper;
    if (joint.torque_limits.is_finite()) lim["torque"] = joint.torque_limits.upper;
    if (!lim.empty()) jj["limits"] = lim;
    if (joint.mimic) {
      jj["mimic"] = {{"source", joint.mimic->source},
                     {"multiplier", joint.mimic->multiplier},
                     {"offset", joint.mimic->offset}};
    }
    doc["joints"].push_back(jj);
  }
  if (!model.tool_links.empty()) doc["tool_links"] = model.tool_links;
  if (!model.named_configurations.empty()) {
    json configs = json::object();
    for (const auto& [name, q] : model.named_configurations) {
      json arr = json::array();
      for (int i = 0; i < q.size(); ++i) arr.push_back(q[i]);
      configs[name] = arr;
    }
    doc["configurations"] = configs;
  }
  return doc.dump(2);
}

/// Rigidly compose a payload (mass, com, inertia about its com) into a link.
/// Returns a new model; topology caches are untouched.
inline RobotModel set_payload(const RobotModel& model, const std::string& link_name, double mass,
                              const Vec3& com, const Mat3& inertia) {
  const int idx = model.link_index(link_name);
  if (idx < 0) throw ValidationError("set_payload: unknown link '" + link_name + "'");
  detail::validate_inertial(link_name + " payload", mass, inertia);

  RobotModel out = model;
  LinkSpec& link = out.links[idx];
  const double m1 = link.mass, m2 = mass;
  const double total = m1 + m2;
  if (total <= 0.0) return out;  // nothing to compose
  const Vec3 combined_com = (m1 * link.com + m2 * com) / total;
  const Vec3 d1 = link.com - combined_com;
  const Vec3 d2 = com - combined_com;
  auto shift = [](double m, const Vec3& d) -> Mat3 {
    return m * (d.squaredNorm() * Mat3::Identity() - d * d.transpose());
  };
  link.inertia = link.inertia + shift(m1, d1) + inertia + shift(m2, d2);
  link.com = combined_com;
  link.mass = total;
  return out;
}

struct SelfPairOptions {
  bool use_retract_pass = true;
};

/// Three-pass self-collision pair pruning: neighbor ignore, pairs colliding
/// at the named "retract" configuration, and pairs that never collide across
/// low-discrepancy samples of the joint box. Deterministic given seed.
inline RobotModel build_self_collision_pairs(const RobotModel& model, int sample_count,
                                             std::uint64_t seed, SelfPairOptions options = {}) {
  if (sample_count < 1) throw ValidationError("build_self_collision_pairs: sample_count must be >= 1");

  // Candidates: neighbor pass is already encoded in the load-time pair set.
  std::vector<std::pair<int, int>> candidates;
  const int ns = model.num_spheres();
  for (int i = 0; i < ns; ++i)
    for (int k = i + 1; k < ns; ++k)
      if (!detail::spheres_adjacent(model, i, k)) candidates.emplace_back(i, k);

  auto collides = [&](const std::vector<Vec3>& centers, const std::pair<int, int>& pair) {
    const double reach = model.sphere_radius[pair.first] + model.sphere_radius[pair.second];
    return (centers[pair.first] - centers[pair.second]).norm() < reach;
  };

  std::vector<char> ignored(candidates.size(), 0);
  if (options.use_retract_pass) {
    const auto it = model.named_configurations.find("retract");
    if (it == model.named_configurations.end())
      throw ValidationError("build_self_collision_pairs: missing 'retract' configuration");
    const std::vector<Vec3> centers = detail::sphere_centers_at(model, it->second);
    for (std::size_t c = 0; c < candidates.size(); ++c)
      if (collides(centers, candidates[c])) ignored[c] = 1;
  }

  for (int a = 0; a < model.dof; ++a) {
    if (!model.limit(a, 0).is_finite())
      throw ValidationError("build_self_collision_pairs: joint '" +
                            model.joints[model.actuated_joints[a]].name +
                            "' needs finite position limits for sampling");
  }
  std::vector<char> ever(candidates.size(), 0);
  VecX q(model.dof);
  for (int s = 0; s < sample_count; ++s) {
    for (int a = 0; a < model.dof; ++a) {
      const Interval& lim = model.limit(a, 0);
      q[a] = lim.lower + halton(seed + static_cast<std::uint64_t>(s), nth_prime(a)) *
                             (lim.upper - lim.lower);
    }
    const std::vector<Vec3> centers = detail::sphere_centers_at(model, q);
    for (std::size_t c = 0; c < candidates.size(); ++c)
      if (!ever[c] && !ignored[c] && collides(centers, candidates[c])) ever[c] = 1;
  }

  RobotModel out = model;
  out.cache.self_collision_pairs.clear();
  for (std::size_t c = 0; c < candidates.size(); ++c)
    if (!ignored[c] && ever[c]) out.cache.self_collision_pairs.push_back(candidates[c]);
  return out;
}

}  // namespace ks

#endif  // KS_ROBOT_MODEL_HPP
