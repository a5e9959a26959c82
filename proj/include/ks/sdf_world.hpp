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

#ifndef KS_SDF_WORLD_HPP
#define KS_SDF_WORLD_HPP

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ks/core.hpp"

namespace ks {

inline constexpr int kBlockEdge = 8;
inline constexpr int kBlockVoxels = kBlockEdge * kBlockEdge * kBlockEdge;

struct TsdfConfig {
  double voxel_size = 0.01;
  double truncation = 0.04;  // must be >= voxel_size
  double alpha_time = 0.99;
  double alpha_frustum = 0.5;
  double weight_threshold = 0.5;
  int capacity = 8192;  // block pool size
  int slot_count = 0;   // hash slots; 0 -> 2×capacity

  void validate() const {
    if (voxel_size <= 0.0) throw ValidationError("tsdf: voxel_size must be > 0");
    if (truncation < voxel_size) throw ValidationError("tsdf: truncation must be >= voxel_size");
    if (!(alpha_time > 0.0 && alpha_time <= 1.0) || !(alpha_frustum > 0.0 && alpha_frustum <= 1.0))
      throw ValidationError("tsdf: decay factors must lie in (0, 1]");
    if (capacity < 1) throw ValidationError("tsdf: capacity must be >= 1");
  }
};

inline TsdfConfig make_tsdf_config(double voxel_size) {
  TsdfConfig config;
  config.voxel_size = voxel_size;
  config.truncation = 4.0 * voxel_size;
  return config;
}

/// 8³ voxels; dual channels: a weighted depth accumulator and an analytic
/// geometry signed distance (+inf when unset).
struct VoxelBlock {
  std::array<double, kBlockVoxels> depth_sum;
  std::array<double, kBlockVoxels> depth_wt;
  std::array<double, kBlockVoxels> geom_sdf;

  void reset() {
    depth_sum.fill(0.0);
    depth_wt.fill(0.0);
    geom_sdf.fill(kInf);
  }
  double weight_total() const {
    double sum = 0.0;
    for (double w : depth_wt) sum += w;
    return sum;
  }
  bool has_geometry() const {
    for (double g : geom_sdf)
      if (std::isfinite(g)) return true;
    return false;
  }
};

struct BlockKey {
  std::int32_t x = 0, y = 0, z = 0;
  bool operator==(const BlockKey&) const = default;
};

inline std::uint64_t block_hash(const BlockKey& key) {
  const auto ux = static_cast<std::uint64_t>(static_cast<std::uint32_t>(key.x));
  const auto uy = static_cast<std::uint64_t>(static_cast<std::uint32_t>(key.y));
  const auto uz = static_cast<std::uint64_t>(static_cast<std::uint32_t>(key.z));
  return (ux * 73856093ull) ^ (uy * 19349663ull) ^ (uz * 83492791ull);
}

/// Open-addressing hash table with linear probing and tombstones, mapping
/// block coordinates to pool indices. Recycled pool indices wait on a free
/// list and are handed out before fresh ones.
struct BlockHashTable {
  enum class SlotState : std::uint8_t { kEmpty, kLive, kTombstone };
  struct Slot {
    BlockKey key;
    std::int32_t pool = -1;
    SlotState state = SlotState::kEmpty;
  };

  std::vector<Slot> slots;
  std::vector<std::int32_t> free_list;
  std::int32_t next_fresh = 0;
  std::int32_t capacity = 0;

  void init(int pool_capacity, int slot_count) {
    capacity = pool_capacity;
    slots.assign(slot_count > 0 ? slot_count : 2 * pool_capacity, Slot{});
    free_list.clear();
    next_fresh = 0;
  }

  int live_count() const {
    int count = 0;
    for (const Slot& slot : slots) count += slot.state == SlotState::kLive;
    return count;
  }
  int available() const {
    return static_cast<int>(free_list.size()) + (capacity - next_fresh);
  }

  /// Pool index of a live key, or -1.
  int find(const BlockKey& key) const {
    const std::size_t n = slots.size();
    std::size_t idx = block_hash(key) % n;
    for (std::size_t probe = 0; probe < n; ++probe) {
      const Slot& slot = slots[idx];
      if (slot.state == SlotState::kEmpty) return -1;
      if (slot.state == SlotState::kLive && slot.key == key) return slot.pool;
      idx = (idx + 1) % n;
    }
    return -1;
  }

  /// Pool index for a key, inserting if absent (free list first). Second
  /// element reports whether a new block was allocated.
  std::pair<int, bool> insert(const BlockKey& key) {
    const std::size_t n = slots.size();
    std::size_t idx = block_hash(key) % n;
    std::ptrdiff_t first_tombstone = -1;
    for (std::size_t probe = 0; probe < n; ++probe) {
      Slot& slot = slots[idx];
      if (slot.state == SlotState::kLive && slot.key == key) return {slot.pool, false};
      if (slot.state == SlotState::kTombstone && first_tombstone < 0)
        first_tombstone = static_cast<std::ptrdiff_t>(idx);
      if (slot.state == SlotState::kEmpty) {
        std::size_t target = first_tombstone >= 0 ? static_cast<std::size_t>(first_tombstone) : idx;
        int pool;
        if (!free_list.empty()) {
          pool = free_list.back();
          free_list.pop_back();
        } else if (next_fresh < capacity) {
          pool = next_fresh++;
        } else {
          throw ValidationError("tsdf: block pool exhausted");
        }
        slots[target] = Slot{key, pool, SlotState::kLive};
        return {pool, true};
      }
      idx = (idx + 1) % n;
    }
    throw ValidationError("tsdf: hash table full");
  }

  void erase(const BlockKey& key) {
    const std::size_t n = slots.size();
    std::size_t idx = block_hash(key) % n;
    for (std::size_t probe = 0; probe < n; ++probe) {
      Slot& slot = slots[idx];
      if (slot.state == SlotState::kEmpty) return;
      if (slot.state == SlotState::kLive && slot.key == key) {
        free_list.push_back(slot.pool);
        slot.state = SlotState::kTombstone;
        slot.pool = -1;
        return;
      }
      idx = (idx + 1) % n;
    }
  }
};

struct DepthFrame {
  int width = 0, height = 0;
  double fx = 0.0, fy = 0.0, cx = 0.0, cy = 0.0;
  Pose pose;  // camera-to-world
  std::vector<float> depth;  // row-major, range along the optical axis; 0/NaN invalid

  void validate() const {
    if (width <= 0 || height <= 0 || fx <= 0.0 || fy <= 0.0)
      throw ValidationError("depth frame: invalid intrinsics");
    if (static_cast<int>(depth.size()) != width * height)
      throw ValidationError("depth frame: depth buffer size mismatch");
  }
  bool depth_valid(float d) const { return std::isfinite(d) && d > 0.0f; }
};

struct SparseTsdf {
  TsdfConfig config;
  BlockHashTable table;
  std::vector<VoxelBlock> pool;
};

struct Cuboid {
  Pose pose;
  Vec3 half_extents = Vec3::Zero();
};

struct SphereShape {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
};

using Primitive = std::variant<Cuboid, SphereShape>;

inline double sdf_cuboid(const Cuboid& cuboid, const Vec3& point) {
  const Vec3 local = cuboid.pose.inverse() * point;
  const Vec3 q = local.cwiseAbs() - cuboid.half_extents;
  const Vec3 outside = q.cwiseMax(0.0);
  return outside.norm() + std::min(q.maxCoeff(), 0.0);
}

inline double sdf_sphere(const SphereShape& sphere, const Vec3& point) {
  return (point - sphere.center).norm() - sphere.radius;
}

inline double sdf_primitive(const Primitive& primitive, const Vec3& point) {
  return std::visit(
      [&](const auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Cuboid>)
          return sdf_cuboid(shape, point);
        else
          return sdf_sphere(shape, point);
      },
      primitive);
}

namespace tsdf_detail {

inline std::int32_t floor_div(std::int32_t value, std::int32_t divisor) {
  return static_cast<std::int32_t>(std::floor(static_cast<double>(value) / divisor));
}

/// Global voxel index of the voxel containing a world point.
inline Eigen::Vector3i voxel_of(const Vec3& point, double voxel_size) {
  return Eigen::Vector3i(static_cast<int>(std::floor(point.x() / voxel_size)),
                         static_cast<int>(std::floor(point.y() / voxel_size)),
                         static_cast<int>(std::floor(point.z() / voxel_size)));
}

inline BlockKey block_of_voxel(const Eigen::Vector3i& voxel) {
  return BlockKey{floor_div(voxel.x(), kBlockEdge), floor_div(voxel.y(), kBlockEdge),
                  floor_div(voxel.z(), kBlockEdge)};
}

inline Vec3 voxel_center(const BlockKey& block, int local_index, double voxel_size) {
  const int lx = local_index % kBlockEdge;
  const int ly = (local_index / kBlockEdge) % kBlockEdge;
  const int lz = local_index / (kBlockEdge * kBlockEdge);
  return Vec3((block.x * kBlockEdge + lx + 0.5) * voxel_size,
              (block.y * kBlockEdge + ly + 0.5) * voxel_size,
              (block.z * kBlockEdge + lz + 0.5) * voxel_size);
}

inline int local_index_of(const Eigen::Vector3i& voxel) {
  auto wrap = [](std::int32_t v) {
    const std::int32_t m = v % kBlockEdge;
    return m < 0 ? m + kBlockEdge : m;
  };
  return wrap(voxel.x()) + kBlockEdge * (wrap(voxel.y()) + kBlockEdge * wrap(voxel.z()));
}

inline Vec3 block_center(const BlockKey& key, double voxel_size) {
  return Vec3((key.x * kBlockEdge + 0.5 * kBlockEdge) * voxel_size,
              (key.y * kBlockEdge + 0.5 * kBlockEdge) * voxel_size,
              (key.z * kBlockEdge + 0.5 * kBlockEdge) * voxel_size);
}

inline double block_bounding_radius(double voxel_size) {
  return 0.5 * kBlockEdge * voxel_size * std::sqrt(3.0);
}

/// Conservative bounding-sphere frustum test against the camera pyramid.
inline bool block_in_frustum(const DepthFrame& camera, const BlockKey& key, double voxel_size) {
  const Vec3 center_cam = camera.pose.inverse() * block_center(key, voxel_size);
  const double radius = block_bounding_radius(voxel_size);
  const Vec3 planes[5] = {
      Vec3(0.0, 0.0, 1.0),                                            // near
      Vec3(camera.fx, 0.0, camera.cx).normalized(),                   // left
      Vec3(-camera.fx, 0.0, camera.width - 1 - camera.cx).normalized(),  // right
      Vec3(0.0, camera.fy, camera.cy).normalized(),                   // top
      Vec3(0.0, -camera.fy, camera.height - 1 - camera.cy).normalized()};  // bottom
  for (const Vec3& n : planes)
    if (n.dot(center_cam) < -radius) return false;
  return true;
}

inline void allocate_keys(SparseTsdf& tsdf, std::vector<BlockKey>& keys) {
  std::sort(keys.begin(), keys.end(), [](const BlockKey& a, const BlockKey& b) {
    return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
  });
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  int required = 0;
  for (const BlockKey& key : keys)
    if (tsdf.table.find(key) < 0) ++required;
  if (required > tsdf.table.available())
    throw ValidationError("tsdf: pool exhausted, frame requires " + std::to_string(required) +
                          " new blocks but only " + std::to_string(tsdf.table.available()) +
                          " are available");
  for (const BlockKey& key : keys) {
    auto [pool, created] = tsdf.table.insert(key);
    if (created) tsdf.pool[pool].reset();
  }
}

}  // namespace tsdf_detail

inline SparseTsdf make_tsdf(const TsdfConfig& config) {
  config.validate();
  SparseTsdf tsdf;
  tsdf.config = config;
  tsdf.table.init(config.capacity, config.slot_count);
  tsdf.pool.resize(config.capacity);
  return tsdf;
}

/// Voxel-project depth integration: discover candidate blocks along per-pixel
/// rays within the truncation band, deduplicate and allocate them, then let
/// every voxel of every touched block project into the image and fold in its
/// weighted signed-distance observation. Returns the number of blocks touched.
inline int integrate_depth(SparseTsdf& tsdf, const DepthFrame& frame) {
  frame.validate();
  const double v = tsdf.config.voxel_size;
  const double trunc = tsdf.config.truncation;

  // Phase 1+2: block discovery along rays, then deduplication.
  std::vector<BlockKey> keys;
  const double step = 4.0 * v;
  const int half_samples = std::max(1, static_cast<int>(std::ceil(trunc / step)));
  for (int py = 0; py < frame.height; ++py) {
    for (int px = 0; px < frame.width; ++px) {
      const float d = frame.depth[py * frame.width + px];
      if (!frame.depth_valid(d)) continue;
      const Vec3 surface_cam((px - frame.cx) * d / frame.fx, (py - frame.cy) * d / frame.fy, d);
      const Vec3 dir_cam = surface_cam.normalized();
      for (int s = -half_samples; s <= half_samples; ++s) {
        const double offset = std::clamp(s * step, -trunc, trunc);
        const Vec3 sample_world = frame.pose * Vec3(surface_cam + offset * dir_cam);
        keys.push_back(tsdf_detail::block_of_voxel(tsdf_detail::voxel_of(sample_world, v)));
      }
    }
  }
  if (keys.empty()) return 0;

  // Phase 3: allocation (free list first).
  tsdf_detail::allocate_keys(tsdf, keys);

  // Phase 4: voxel-centric integration.
  const Pose world_to_cam = frame.pose.inverse();
  for (const BlockKey& key : keys) {
    VoxelBlock& block = tsdf.pool[tsdf.table.find(key)];
    for (int voxel = 0; voxel < kBlockVoxels; ++voxel) {
      const Vec3 center_cam = world_to_cam * tsdf_detail::voxel_center(key, voxel, v);
      if (center_cam.z() <= 0.0) continue;
      const auto px = static_cast<int>(std::lround(frame.fx * center_cam.x() / center_cam.z() + frame.cx));
      const auto py = static_cast<int>(std::lround(frame.fy * center_cam.y() / center_cam.z() + frame.cy));
      if (px < 0 || px >= frame.width || py < 0 || py >= frame.height) continue;
      const float d = frame.depth[py * frame.width + px];
      if (!frame.depth_valid(d)) continue;
      const double sd_raw = static_cast<double>(d) - center_cam.z();
      if (sd_raw < -trunc) continue;  // occluded beyond the band: no observation
      const double sd = std::min(sd_raw, trunc);
      const double c = (frame.fx * v / center_cam.z()) * (frame.fy * v / center_cam.z());
      const double w = std::max(c, 1.0);
      block.depth_sum[voxel] += w * sd;
      block.depth_wt[voxel] += w;
    }
  }
  return static_cast<int>(keys.size());
}

/// Stamp an analytic primitive into the geometry channel: allocate every
/// block whose signed distance can intersect the truncation band and take the
/// per-voxel minimum with the analytic distance (negative inside).
inline void stamp_primitive(SparseTsdf& tsdf, const Primitive& primitive) {
  const double v = tsdf.config.voxel_size;
  const double trunc = tsdf.config.truncation;

  Vec3 lo, hi;
  if (const auto* cuboid = std::get_if<Cuboid>(&primitive)) {
    if (!cuboid->half_extents.allFinite() || !cuboid->pose.translation.allFinite())
      throw ValidationError("stamp: non-finite cuboid");
    lo = Vec3::Constant(kInf);
    hi = Vec3::Constant(-kInf);
    for (int corner = 0; corner < 8; ++corner) {
      const Vec3 sign((corner & 1) ? 1.0 : -1.0, (corner & 2) ? 1.0 : -1.0,
                      (corner & 4) ? 1.0 : -1.0);
      const Vec3 world = cuboid->pose * Vec3(sign.cwiseProduct(cuboid->half_extents));
      lo = lo.cwiseMin(world);
      hi = hi.cwiseMax(world);
    }
  } else {
    const auto& sphere = std::get<SphereShape>(primitive);
    if (!sphere.center.allFinite() || !std::isfinite(sphere.radius))
      throw ValidationError("stamp: non-finite sphere");
    lo = sphere.center.array() - sphere.radius;
    hi = sphere.center.array() + sphere.radius;
  }
  lo.array() -= trunc;
  hi.array() += trunc;

  const Eigen::Vector3i vlo = tsdf_detail::voxel_of(lo, v);
  const Eigen::Vector3i vhi = tsdf_detail::voxel_of(hi, v);
  const BlockKey blo = tsdf_detail::block_of_voxel(vlo);
  const BlockKey bhi = tsdf_detail::block_of_voxel(vhi);
  const double reach = trunc + tsdf_detail::block_bounding_radius(v);

  std::vector<BlockKey> keys;
  for (std::int32_t bz = blo.z; bz <= bhi.z; ++bz)
    for (std::int32_t by = blo.y; by <= bhi.y; ++by)
      for (std::int32_t bx = blo.x; bx <= bhi.x; ++bx) {
        const BlockKey key{bx, by, bz};
        if (std::abs(sdf_primitive(primitive, tsdf_detail::block_center(key, v))) <= reach)
          keys.push_back(key);
      }
  tsdf_detail::allocate_keys(tsdf, keys);

  for (const BlockKey& key : keys) {
    VoxelBlock& block = tsdf.pool[tsdf.table.find(key)];
    for (int voxel = 0; voxel < kBlockVoxels; ++voxel) {
      const double sd = sdf_primitive(primitive, tsdf_detail::voxel_center(key, voxel, v));
      block.geom_sdf[voxel] = std::min(block.geom_sdf[voxel], sd);
    }
  }
}

/// Two-tier multiplicative weight decay: every allocated block fades by the
/// time factor, blocks inside the camera frustum additionally by the frustum
/// factor. The geometry channel is untouched.
inline void decay_weights(SparseTsdf& tsdf, const DepthFrame& camera) {
  for (const BlockHashTable::Slot& slot : tsdf.table.slots) {
    if (slot.state != BlockHashTable::SlotState::kLive) continue;
    double factor = tsdf.config.alpha_time;
    if (tsdf_detail::block_in_frustum(camera, slot.key, tsdf.config.voxel_size))
      factor *= tsdf.config.alpha_frustum;
    for (double& w : tsdf.pool[slot.pool].depth_wt) w *= factor;
  }
}

/// Tombstone blocks whose summed depth weight fell below the threshold and
/// that hold no stamped geometry; their pool indices go to the free list for
/// reuse. Returns the number of blocks recycled.
inline int recycle_blocks(SparseTsdf& tsdf) {
  int recycled = 0;
  for (BlockHashTable::Slot& slot : tsdf.table.slots) {
    if (slot.state != BlockHashTable::SlotState::kLive) continue;
    VoxelBlock& block = tsdf.pool[slot.pool];
    if (block.weight_total() < tsdf.config.weight_threshold && !block.has_geometry()) {
      tsdf.table.free_list.push_back(slot.pool);
      slot.state = BlockHashTable::SlotState::kTombstone;
      slot.pool = -1;
      ++recycled;
    }
  }
  return recycled;
}

namespace tsdf_detail {

enum class Channel { kCombined, kGeometryOnly };

inline std::optional<double> query_channel(const SparseTsdf& tsdf, const Vec3& point,
                                           Channel channel) {
  const Eigen::Vector3i voxel = voxel_of(point, tsdf.config.voxel_size);
  const int pool = tsdf.table.find(block_of_voxel(voxel));
  if (pool < 0) return std::nullopt;
  const VoxelBlock& block = tsdf.pool[pool];
  const int local = local_index_of(voxel);
  std::optional<double> best;
  if (channel == Channel::kCombined && block.depth_wt[local] > 0.0)
    best = block.depth_sum[local] / block.depth_wt[local];
  if (std::isfinite(block.geom_sdf[local]))
    best = best ? std::min(*best, block.geom_sdf[local]) : block.geom_sdf[local];
  return best;
}

}  // namespace tsdf_detail

/// Effective signed distance at a point: min of the available channels, or
/// nullopt when the containing block is unallocated / both channels unset.
inline std::optional<double> query_tsdf(const SparseTsdf& tsdf, const Vec3& point) {
  return tsdf_detail::query_channel(tsdf, point, tsdf_detail::Channel::kCombined);
}

/// Geometry channel only (used by ESDF sign recovery).
inline std::optional<double> query_tsdf_geom(const SparseTsdf& tsdf, const Vec3& point) {
  return tsdf_detail::query_channel(tsdf, point, tsdf_detail::Channel::kGeometryOnly);
}

inline int allocated_block_count(const SparseTsdf& tsdf) { return tsdf.table.live_count(); }

// --- depth frame file format -------------------------------------------------
// 8-byte magic "KSDEPTH1", little-endian uint32 header length, JSON header
// {width, height, fx, fy, cx, cy, pose:{xyz, rpy}}, then width·height
// float32 little-endian depths in row-major order.

inline constexpr char kDepthMagic[8] = {'K', 'S', 'D', 'E', 'P', 'T', 'H', '1'};

inline void save_depth_frame(const std::string& path, const DepthFrame& frame) {
  frame.validate();
  nlohmann::json header;
  header["width"] = frame.width;
  header["height"] = frame.height;
  header["fx"] = frame.fx;
  header["fy"] = frame.fy;
  header["cx"] = frame.cx;
  header["cy"] = frame.cy;
  const Mat3& r = frame.pose.rotation;
  const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
  header["pose"] = {{"xyz",
                     {frame.pose.translation.x(), frame.pose.translation.y(),
                      frame.pose.translation.z()}},
                    {"rpy", {std::atan2(r(2, 1), r(2, 2)), pitch, std::atan2(r(1, 0), r(0, 0))}}};
  const std::string header_text = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out.write(kDepthMagic, 8);
  const auto len = static_cast<std::uint32_t>(header_text.size());
  out.write(reinterpret_cast<const char*>(&len), 4);
  out.write(header_text.data(), header_text.size());
  out.write(reinterpret_cast<const char*>(frame.depth.data()),
            static_cast<std::streamsize>(frame.depth.size() * sizeof(float)));
}

inline DepthFrame load_depth_frame(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open depth frame '" + path + "'");
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kDepthMagic, 8) != 0)
    throw ParseError("'" + path + "' is not a KSDEPTH1 file");
  std::uint32_t len = 0;
  in.read(reinterpret_cast<char*>(&len), 4);
  std::string header_text(len, '\0');
  in.read(header_text.data(), len);
  if (!in) throw ParseError("'" + path + "': truncated header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path + "': bad header: " + e.what());
  }
  DepthFrame frame;
  frame.width = header.at("width").get<int>();
  frame.height = header.at("height").get<int>();
  frame.fx = header.at("fx").get<double>();
  frame.fy = header.at("fy").get<double>();
  frame.cx = header.at("cx").get<double>();
  frame.cy = header.at("cy").get<double>();
  const auto& xyz = header.at("pose").at("xyz");
  const auto& rpy = header.at("pose").at("rpy");
  frame.pose.translation = Vec3(xyz[0], xyz[1], xyz[2]);
  frame.pose.rotation = rpy_to_matrix(rpy[0], rpy[1], rpy[2]);
  frame.depth.resize(static_cast<std::size_t>(frame.width) * frame.height);
  in.read(reinterpret_cast<char*>(frame.depth.data()),
          static_cast<std::streamsize>(frame.depth.size() * sizeof(float)));
  if (!in) throw ParseError("'" + path + "': truncated depth data");
  frame.validate();
  return frame;
}

}  // namespace ks

#endif  // KS_SDF_WORLD_HPP
