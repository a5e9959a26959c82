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

#ifndef KS_BSPLINE_HPP
#define KS_BSPLINE_HPP

#include <optional>
#include <span>
#include <vector>

#include "ks/core.hpp"

namespace ks {

/// One trajectory sample: position and its first three time derivatives.
struct StateSample {
  double t = 0.0;
  VecX theta, theta_dot, theta_ddot, theta_dddot;
};

/// Per-joint uniform cubic B-spline over control points, with optional ghost
/// points anchoring a non-static start state and optional terminal clamping
/// (final control point logically repeated four times).
///
/// The evaluable segment sequence is built from an extended point array:
///   [p0, u-3, u-2, u-1]  when ghost points are present (p0 is the jerk-free
///                        extension 3u-3 - 3u-2 + u-1, so that segment 0
///                        starts exactly at the anchored boundary state),
///   the control points,
///   [last, last, last]   when terminally clamped.
/// Segment s is supported by extended points [s, s+3]; time runs
/// t = (s + alpha) * dt_u.
struct SplineTrajectory {
  MatX control_points;  // d×K
  double dt_u = 1.0;
  std::optional<MatX> ghost_points;  // d×3: u-3, u-2, u-1
  bool terminal_clamped = false;
  int n_interp = 4;

  int dof() const { return static_cast<int>(control_points.rows()); }
  int num_control_points() const { return static_cast<int>(control_points.cols()); }
  int num_extended() const {
    return num_control_points() + (ghost_points ? 4 : 0) + (terminal_clamped ? 3 : 0);
  }
  int num_segments() const { return num_extended() - 3; }

  /// Column e of the extended point sequence.
  VecX extended_point(int e) const {
    const int K = num_control_points();
    if (ghost_points) {
      const MatX& g = *ghost_points;
      if (e == 0) return 3.0 * g.col(0) - 3.0 * g.col(1) + g.col(2);
      if (e <= 3) return g.col(e - 1);
      e -= 4;
    }
    return control_points.col(std::min(e, K - 1));
  }

  /// Extended index -> control point column, or -1 for derived points
  /// (ghost prefix). Terminal repeats chain into the last control point.
  int extended_to_control(int e) const {
    if (ghost_points) {
      if (e < 4) return -1;
      e -= 4;
    }
    return std::min(e, num_control_points() - 1);
  }

  void validate() const {
    if (dt_u <= 0.0) throw ValidationError("spline: dt_u must be > 0");
    if (n_interp < 1) throw ValidationError("spline: n_interp must be >= 1");
    if (ghost_points) {
      if (ghost_points->rows() != control_points.rows() || ghost_points->cols() != 3)
        throw ValidationError("spline: ghost_points must be d×3");
      if (num_control_points() < 1) throw ValidationError("spline: needs K >= 1 control points");
    } else if (num_control_points() + (terminal_clamped ? 3 : 0) < 4) {
      throw ValidationError("spline: needs K >= 4 control points without ghost points");
    }
  }
};

namespace bspline_detail {

/// 4×4 basis: row r gives the weights of the four supports for the r-th time
/// derivative at local parameter alpha, including the dt scaling.
inline Eigen::Matrix4d basis(double alpha, double dt) {
  Eigen::Matrix4d p;
  const double a = alpha;
  p << a * a * a, a * a, a, 1.0,
       3.0 * a * a, 2.0 * a, 1.0, 0.0,
       6.0 * a, 2.0, 0.0, 0.0,
       6.0, 0.0, 0.0, 0.0;
  Eigen::Matrix4d c;
  c << -1.0, 3.0, -3.0, 1.0,
        3.0, -6.0, 3.0, 0.0,
       -3.0, 0.0, 3.0, 0.0,
        1.0, 4.0, 1.0, 0.0;
  c /= 6.0;
  Eigen::Matrix4d b = p * c;
  double scale = 1.0;
  for (int r = 1; r < 4; ++r) {
    scale /= dt;
    b.row(r) *= scale;
  }
  return b;
}

}  // namespace bspline_detail

inline StateSample evaluate(const SplineTrajectory& spline, int segment, double alpha) {
  spline.validate();
  if (segment < 0 || segment >= spline.num_segments())
    throw ValidationError("spline: segment out of range");
  const Eigen::Matrix4d b = bspline_detail::basis(alpha, spline.dt_u);
  StateSample sample;
  sample.t = (segment + alpha) * spline.dt_u;
  const int d = spline.dof();
  sample.theta = VecX::Zero(d);
  sample.theta_dot = VecX::Zero(d);
  sample.theta_ddot = VecX::Zero(d);
  sample.theta_dddot = VecX::Zero(d);
  for (int i = 0; i < 4; ++i) {
    const VecX u = spline.extended_point(segment + i);
    sample.theta += b(0, i) * u;
    sample.theta_dot += b(1, i) * u;
    sample.theta_ddot += b(2, i) * u;
    sample.theta_dddot += b(3, i) * u;
  }
  return sample;
}

/// n_interp samples per segment at alpha = i/n_interp plus the closing
/// endpoint of the last segment: num_segments*n_interp + 1 samples with
/// spacing dt_u/n_interp.
inline std::vector<StateSample> sample_uniform(const SplineTrajectory& spline) {
  spline.validate();
  std::vector<StateSample> samples;
  samples.reserve(spline.num_segments() * spline.n_interp + 1);
  for (int s = 0; s < spline.num_segments(); ++s)
    for (int i = 0; i < spline.n_interp; ++i)
      samples.push_back(evaluate(spline, s, static_cast<double>(i) / spline.n_interp));
  samples.push_back(evaluate(spline, spline.num_segments() - 1, 1.0));
  return samples;
}

/// Per-sample upstream gradients: d×4 blocks, columns ordered
/// (θ, θ̇, θ̈, θ⃛), aligned with sample_uniform output.
using SampleGradient = Eigen::Matrix<double, Eigen::Dynamic, 4>;

/// Transpose of the forward evaluation: accumulate B(α)ᵀ g over every sample
/// into the control-point gradient. Ghost points receive nothing; terminal
/// repeats chain into the final control point.
inline MatX spline_vjp(const SplineTrajectory& spline, std::span<const SampleGradient> grads) {
  spline.validate();
  const int expected = spline.num_segments() * spline.n_interp + 1;
  if (static_cast<int>(grads.size()) != expected)
    throw ValidationError("spline_vjp: gradient count does not match sample_uniform output");
  MatX out = MatX::Zero(spline.dof(), spline.num_control_points());
  int idx = 0;
  auto accumulate = [&](int segment, double alpha, const SampleGradient& g) {
    const Eigen::Matrix4d b = bspline_detail::basis(alpha, spline.dt_u);
    for (int i = 0; i < 4; ++i) {
      const int cp = spline.extended_to_control(segment + i);
      if (cp < 0) continue;
      for (int r = 0; r < 4; ++r) out.col(cp) += b(r, i) * g.col(r);
    }
  };
  for (int s = 0; s < spline.num_segments(); ++s)
    for (int i = 0; i < spline.n_interp; ++i)
      accumulate(s, static_cast<double>(i) / spline.n_interp, grads[idx++]);
  accumulate(spline.num_segments() - 1, 1.0, grads[idx]);
  return out;
}

/// Ghost control points (u-3, u-2, u-1) anchoring the spline start to the
/// state (θ₀, θ̇₀, θ̈₀) with zero initial jerk.
inline MatX ghost_points(const VecX& theta0, const VecX& theta_dot0, const VecX& theta_ddot0,
                         double dt_u) {
  const double dt2 = dt_u * dt_u;
  MatX g(theta0.size(), 3);
  g.col(0) = theta0 - (1.0 / 6.0) * dt2 * theta_ddot0;
  g.col(1) = theta0 + dt_u * theta_dot0 + (1.0 / 3.0) * dt2 * theta_ddot0;
  g.col(2) = theta0 + 2.0 * dt_u * theta_dot0 + (11.0 / 6.0) * dt2 * theta_ddot0;
  return g;
}

}  // namespace ks

#endif  // KS_BSPLINE_HPP
