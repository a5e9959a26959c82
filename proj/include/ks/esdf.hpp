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

#ifndef KS_ESDF_HPP
#define KS_ESDF_HPP

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "ks/core.hpp"
#include "ks/sdf_world.hpp"

namespace ks {

enum class SeedingMode { kScatter, kGather };

struct EsdfConfig {
  Vec3 origin = Vec3::Zero();
  int nx = 1, ny = 1, nz = 1;
  double voxel_size = 0.01;
  SeedingMode seeding = SeedingMode::kGather;

  void validate() const {
    if (nx < 1 || ny < 1 || nz < 1) throw ValidationError("esdf: dims must be >= 1");
    if (voxel_size <= 0.0) throw ValidationError("esdf: voxel_size must be > 0");
  }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(nx) * ny * nz;
  }
  std::size_t index(int x, int y, int z) const {
    return static_cast<std::size_t>(x) + static_cast<std::size_t>(nx) * (y + static_cast<std::size_t>(ny) * z);
  }
  Vec3 cell_center(int x, int y, int z) const {
    return origin + Vec3((x + 0.5) * voxel_size, (y + 0.5) * voxel_size, (z + 0.5) * voxel_size);
  }
};

/// Dense signed distance grid with per-voxel nearest-site coordinates.
/// Distances are derived from integer site offsets, so the transform is exact.
struct DenseEsdf {
  EsdfConfig config;
  std::vector<std::array<std::int32_t, 3>> site;  // (-1,-1,-1) when no sites exist
  std::vector<double> distance;                   // meters; +inf sentinel without sites
  bool has_sites = false;
  bool signs_recovered = false;
};

using SeedMask = std::vector<std::uint8_t>;

/// Seed band threshold relative to the TSDF voxel size.
inline double seed_threshold(const SparseTsdf& tsdf) { return 0.9 * tsdf.config.voxel_size; }

/// Scatter seeding: iterate allocated TSDF voxels and mark the ESDF cell that
/// contains every surface voxel (|sdf| below the band threshold).
inline SeedMask seed_scatter(const SparseTsdf& tsdf, const EsdfConfig& config) {
  config.validate();
  SeedMask seeds(config.cell_count(), 0);
  const double threshold = seed_threshold(tsdf);
  const double v = tsdf.config.voxel_size;
  for (const BlockHashTable::Slot& slot : tsdf.table.slots) {
    if (slot.state != BlockHashTable::SlotState::kLive) continue;
    const VoxelBlock& block = tsdf.pool[slot.pool];
    for (int voxel = 0; voxel < kBlockVoxels; ++voxel) {
      std::optional<double> sdf;
      if (block.depth_wt[voxel] > 0.0) sdf = block.depth_sum[voxel] / block.depth_wt[voxel];
      if (std::isfinite(block.geom_sdf[voxel]))
        sdf = sdf ? std::min(*sdf, block.geom_sdf[voxel]) : block.geom_sdf[voxel];
      if (!sdf || std::abs(*sdf) >= threshold) continue;
      const Vec3 center = tsdf_detail::voxel_center(slot.key, voxel, v);
      const Vec3 rel = (center - config.origin) / config.voxel_size;
      const int cx = static_cast<int>(std::floor(rel.x()));
      const int cy = static_cast<int>(std::floor(rel.y()));
      const int cz = static_cast<int>(std::floor(rel.z()));
      if (cx < 0 || cx >= config.nx || cy < 0 || cy >= config.ny || cz < 0 || cz >= config.nz)
        continue;
      seeds[config.index(cx, cy, cz)] = 1;
    }
  }
  return seeds;
}

/// Gather seeding: every ESDF cell probes the TSDF at its center and the six
/// face centers; constant work per cell regardless of scene content.
inline SeedMask seed_gather(const SparseTsdf& tsdf, const EsdfConfig& config) {
  config.validate();
  SeedMask seeds(config.cell_count(), 0);
  const double threshold = seed_threshold(tsdf);
  const double h = 0.5 * config.voxel_size;
  const Vec3 offsets[7] = {Vec3::Zero(),      Vec3(h, 0, 0),  Vec3(-h, 0, 0), Vec3(0, h, 0),
                           Vec3(0, -h, 0),    Vec3(0, 0, h),  Vec3(0, 0, -h)};
  for (int z = 0; z < config.nz; ++z)
    for (int y = 0; y < config.ny; ++y)
      for (int x = 0; x < config.nx; ++x) {
        const Vec3 center = config.cell_center(x, y, z);
        for (const Vec3& offset : offsets) {
          const std::optional<double> sdf = query_tsdf(tsdf, center + offset);
          if (sdf && std::abs(*sdf) < threshold) {
            seeds[config.index(x, y, z)] = 1;
            break;
          }
        }
      }
  return seeds;
}

namespace esdf_detail {

/// Lower envelope of the parabolas f_i(t) = (t - u_i)² + r2_i over integer
/// positions, earlier site kept on ties. Intersections are compared as exact
/// rationals in 64-bit integers.
struct Envelope {
  struct Entry {
    std::int64_t u;    // parabola apex position along the row
    std::int64_t r2;   // squared offset of the candidate site from the row
    int payload;       // caller-defined candidate id
    std::int64_t num;  // boundary where this parabola takes over: t > num/den
    std::int64_t den;  // den > 0; the first entry uses den == 0 (== -inf boundary)
  };
  std::vector<Entry> entries;

  void clear() { entries.clear(); }

  void push(std::int64_t u, std::int64_t r2, int payload) {
    Entry entry{u, r2, payload, 0, 0};
    while (!entries.empty()) {
      const Entry& top = entries.back();
      // Intersection of `entry` and `top`: t* = (u² + r2 − u_t² − r2_t) / (2(u − u_t)).
      const std::int64_t num = u * u + r2 - top.u * top.u - top.r2;
      const std::int64_t den = 2 * (u - top.u);
      if (den == 0) {
        // same position: keep the closer parabola, earlier on ties
        if (r2 < top.r2) entries.pop_back();
        else return;
        continue;
      }
      // pop `top` when the new boundary does not lie strictly after top's
      if (top.den == 0 ? false : num * top.den <= top.num * den) {
        entries.pop_back();
        continue;
      }
      entry.num = num;
      entry.den = den;
      break;
    }
    if (entries.empty()) {
      entry.num = 0;
      entry.den = 0;  // -inf boundary
    }
    entries.push_back(entry);
  }

  /// Walk outputs t = 0..n-1 in order, invoking fn(t, payload) with the
  /// winning parabola. Later parabolas take over strictly after boundaries.
  template <typename Fn>
  void walk(std::int64_t n, Fn&& fn) const {
    std::size_t k = 0;
    for (std::int64_t t = 0; t < n; ++t) {
      while (k + 1 < entries.size()) {
        const Entry& next = entries[k + 1];
        if (next.num < t * next.den)  // boundary strictly before t
          ++k;
        else
          break;
      }
      fn(t, entries[k].payload);
    }
  }
};

}  // namespace esdf_detail

/// Exact Euclidean nearest-site assignment over the grid: a bidirectional
/// Z-column flood followed by Y and X dominance sweeps, all in integer
/// arithmetic. With no seeds, distances are +inf and has_sites is false.
inline DenseEsdf propagate(const SeedMask& seeds, const EsdfConfig& config) {
  config.validate();
  if (seeds.size() != config.cell_count())
    throw ValidationError("esdf: seed mask size does not match grid");
  DenseEsdf esdf;
  esdf.config = config;
  esdf.site.assign(config.cell_count(), {-1, -1, -1});
  esdf.distance.assign(config.cell_count(), kInf);

  const int nx = config.nx, ny = config.ny, nz = config.nz;
  bool any = false;
  for (std::uint8_t s : seeds)
    if (s) {
      any = true;
      break;
    }
  esdf.has_sites = any;
  if (!any) return esdf;

  // Phase 1: per (x, y) column, nearest seed z via bidirectional flood.
  std::vector<std::int32_t> nearest_z(config.cell_count(), -1);
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      std::int32_t last = -1;
      for (int z = 0; z < nz; ++z) {
        const std::size_t idx = config.index(x, y, z);
        if (seeds[idx]) last = z;
        nearest_z[idx] = last;
      }
      std::int32_t ahead = -1;
      for (int z = nz - 1; z >= 0; --z) {
        const std::size_t idx = config.index(x, y, z);
        if (seeds[idx]) ahead = z;
        if (ahead >= 0) {
          const std::int32_t behind = nearest_z[idx];
          // strict inequality keeps the earlier site on ties
          if (behind < 0 || (ahead - z) < (z - behind)) nearest_z[idx] = ahead;
        }
      }
    }
  }

  // Phase 2: per (x, z) row along y, dominance sweep over column candidates.
  std::vector<std::int32_t> site_y(config.cell_count(), -1);
  std::vector<std::int32_t> site_z(config.cell_count(), -1);
  esdf_detail::Envelope envelope;
  for (int z = 0; z < nz; ++z) {
    for (int x = 0; x < nx; ++x) {
      envelope.clear();
      for (int y = 0; y < ny; ++y) {
        const std::int32_t zs = nearest_z[config.index(x, y, z)];
        if (zs < 0) continue;
        const std::int64_t dz = static_cast<std::int64_t>(z) - zs;
        envelope.push(y, dz * dz, y);
      }
      if (envelope.entries.empty()) continue;
      envelope.walk(ny, [&](std::int64_t y, int candidate_y) {
        const std::size_t idx = config.index(x, static_cast<int>(y), z);
        site_y[idx] = candidate_y;
        site_z[idx] = nearest_z[config.index(x, candidate_y, z)];
      });
    }
  }

  // Phase 3: per (y, z) row along x.
  for (int z = 0; z < nz; ++z) {
    for (int y = 0; y < ny; ++y) {
      envelope.clear();
      for (int x = 0; x < nx; ++x) {
        const std::size_t idx = config.index(x, y, z);
        if (site_y[idx] < 0) continue;
        const std::int64_t dy = static_cast<std::int64_t>(y) - site_y[idx];
        const std::int64_t dz = static_cast<std::int64_t>(z) - site_z[idx];
        envelope.push(x, dy * dy + dz * dz, x);
      }
      if (envelope.entries.empty()) continue;
      envelope.walk(nx, [&](std::int64_t x, int candidate_x) {
        const std::size_t src = config.index(candidate_x, y, z);
        const std::size_t idx = config.index(static_cast<int>(x), y, z);
        esdf.site[idx] = {candidate_x, site_y[src], site_z[src]};
        const std::int64_t dx = x - candidate_x;
        const std::int64_t dy = static_cast<std::int64_t>(y) - site_y[src];
        const std::int64_t dz = static_cast<std::int64_t>(z) - site_z[src];
        esdf.distance[idx] =
            std::sqrt(static_cast<double>(dx * dx + dy * dy + dz * dz)) * config.voxel_size;
      });
    }
  }
  return esdf;
}

/// Interior/exterior sign recovery: sample the static geometry channel one
/// voxel beyond the site along the site-to-query direction; when that misses,
/// fall back to the combined signed distance at the query voxel itself, and
/// default to exterior with no observation at all. Magnitudes are unchanged.
inline DenseEsdf recover_signs(DenseEsdf esdf, const SparseTsdf& tsdf) {
  const EsdfConfig& config = esdf.config;
  if (esdf.has_sites) {
    for (int z = 0; z < config.nz; ++z) {
      for (int y = 0; y < config.ny; ++y) {
        for (int x = 0; x < config.nx; ++x) {
          const std::size_t idx = config.index(x, y, z);
          const auto& site = esdf.site[idx];
          if (site[0] < 0) continue;
          const Vec3 query = config.cell_center(x, y, z);
          const Vec3 site_center = config.cell_center(site[0], site[1], site[2]);
          bool negative = false;
          bool resolved = false;
          const Vec3 delta = query - site_center;
          if (delta.squaredNorm() > 0.0) {
            const Vec3 probe = site_center + config.voxel_size * delta.normalized();
            if (const std::optional<double> geom = query_tsdf_geom(tsdf, probe)) {
              negative = *geom < 0.0;
              resolved = true;
            }
          }
          if (!resolved) {
            if (const std::optional<double> combined = query_tsdf(tsdf, query))
              negative = *combined < 0.0;
          }
          if (negative) esdf.distance[idx] = -esdf.distance[idx];
        }
      }
    }
  }
  esdf.signs_recovered = true;
  return esdf;
}

/// Seed, propagate, and recover signs in one call.
inline DenseEsdf build_esdf(const SparseTsdf& tsdf, const EsdfConfig& config) {
  const SeedMask seeds = config.seeding == SeedingMode::kScatter ? seed_scatter(tsdf, config)
                                                                 : seed_gather(tsdf, config);
  return recover_signs(propagate(seeds, config), tsdf);
}

struct EsdfSample {
  double distance = kInf;
  Vec3 gradient = Vec3::Zero();
  bool inside = false;  // query point inside the workspace box
};

/// Trilinear interpolation over the eight enclosing voxel centers with its
/// analytic gradient; out-of-box points clamp to the boundary cell.
inline EsdfSample query(const DenseEsdf& esdf, const Vec3& point) {
  const EsdfConfig& config = esdf.config;
  EsdfSample sample;
  sample.inside = (point.x() >= config.origin.x() && point.y() >= config.origin.y() &&
                   point.z() >= config.origin.z() &&
                   point.x() <= config.origin.x() + config.nx * config.voxel_size &&
                   point.y() <= config.origin.y() + config.ny * config.voxel_size &&
                   point.z() <= config.origin.z() + config.nz * config.voxel_size);
  if (!esdf.has_sites) return sample;

  const Vec3 s = (point - config.origin) / config.voxel_size - Vec3::Constant(0.5);
  int i0[3], i1[3];
  double frac[3];
  const int dims[3] = {config.nx, config.ny, config.nz};
  for (int axis = 0; axis < 3; ++axis) {
    if (dims[axis] == 1) {
      i0[axis] = i1[axis] = 0;
      frac[axis] = 0.0;
      continue;
    }
    const double clamped = std::clamp(s[axis], 0.0, static_cast<double>(dims[axis] - 1));
    i0[axis] = std::min(static_cast<int>(clamped), dims[axis] - 2);
    i1[axis] = i0[axis] + 1;
    frac[axis] = clamped - i0[axis];
  }
  auto value = [&](int cx, int cy, int cz) {
    return esdf.distance[config.index(cx ? i1[0] : i0[0], cy ? i1[1] : i0[1],
                                      cz ? i1[2] : i0[2])];
  };
  const double c000 = value(0, 0, 0), c100 = value(1, 0, 0);
  const double c010 = value(0, 1, 0), c110 = value(1, 1, 0);
  const double c001 = value(0, 0, 1), c101 = value(1, 0, 1);
  const double c011 = value(0, 1, 1), c111 = value(1, 1, 1);
  const double fx = frac[0], fy = frac[1], fz = frac[2];

  const double c00 = c000 * (1 - fx) + c100 * fx;
  const double c10 = c010 * (1 - fx) + c110 * fx;
  const double c01 = c001 * (1 - fx) + c101 * fx;
  const double c11 = c011 * (1 - fx) + c111 * fx;
  const double c0 = c00 * (1 - fy) + c10 * fy;
  const double c1 = c01 * (1 - fy) + c11 * fy;
  sample.distance = c0 * (1 - fz) + c1 * fz;

  const double inv = 1.0 / config.voxel_size;
  sample.gradient.x() = ((c100 - c000) * (1 - fy) * (1 - fz) + (c110 - c010) * fy * (1 - fz) +
                         (c101 - c001) * (1 - fy) * fz + (c111 - c011) * fy * fz) *
                        inv;
  sample.gradient.y() = ((c10 - c00) * (1 - fz) + (c11 - c01) * fz) * inv;
  sample.gradient.z() = (c1 - c0) * inv;
  return sample;
}

// --- export format ------------------------------------------------------------
// 8-byte magic "KSESDF1\0", little-endian uint32 header length, JSON header
// {origin, dims, voxel_size}, then nx·ny·nz float32 distances (x fastest).

inline constexpr char kEsdfMagic[8] = {'K', 'S', 'E', 'S', 'D', 'F', '1', '\0'};

inline void save_esdf(const std::string& path, const DenseEsdf& esdf) {
  nlohmann::json header;
  header["origin"] = {esdf.config.origin.x(), esdf.config.origin.y(), esdf.config.origin.z()};
  header["dims"] = {esdf.config.nx, esdf.config.ny, esdf.config.nz};
  header["voxel_size"] = esdf.config.voxel_size;
  const std::string header_text = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out.write(kEsdfMagic, 8);
  const auto len = static_cast<std::uint32_t>(header_text.size());
  out.write(reinterpret_cast<const char*>(&len), 4);
  out.write(header_text.data(), header_text.size());
  for (double d : esdf.distance) {
    const float f = static_cast<float>(d);
    out.write(reinterpret_cast<const char*>(&f), sizeof(float));
  }
}

struct EsdfExport {
  Vec3 origin;
  int nx, ny, nz;
  double voxel_size;
  std::vector<float> distance;
};

inline EsdfExport load_esdf(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open esdf '" + path + "'");
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kEsdfMagic, 8) != 0)
    throw ParseError("'" + path + "' is not a KSESDF1 file");
  std::uint32_t len = 0;
  in.read(reinterpret_cast<char*>(&len), 4);
  std::string header_text(len, '\0');
  in.read(header_text.data(), len);
  nlohmann::json header = nlohmann::json::parse(header_text);
  EsdfExport out;
  out.origin = Vec3(header["origin"][0], header["origin"][1], header["origin"][2]);
  out.nx = header["dims"][0];
  out.ny = header["dims"][1];
  out.nz = header["dims"][2];
  out.voxel_size = header["voxel_size"];
  out.distance.resize(static_cast<std::size_t>(out.nx) * out.ny * out.nz);
  in.read(reinterpret_cast<char*>(out.distance.data()),
          static_cast<std::streamsize>(out.distance.size() * sizeof(float)));
  if (!in) throw ParseError("'" + path + "': truncated distance data");
  return out;
}

}  // namespace ks

#endif  // KS_ESDF_HPP
