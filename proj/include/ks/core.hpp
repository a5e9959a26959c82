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

#ifndef KS_CORE_HPP
#define KS_CORE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ks {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thrown when an input document or argument violates a model contract.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on malformed files or byte streams.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

/// Rigid transform stored as rotation + translation.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Pose Identity() { return Pose{}; }

  Pose operator*(const Pose& other) const {
    return Pose{rotation * other.rotation, rotation * other.translation + translation};
  }

  Vec3 operator*(const Vec3& point) const { return rotation * point + translation; }

  Pose inverse() const {
    Pose out;
    out.rotation = rotation.transpose();
    out.translation = -(out.rotation * translation);
    return out;
  }

  /// Max deviation of RᵀR from identity; 0 for a perfect rotation.
  double orthonormality_error() const {
    return (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  }
};

/// Rotation about a unit axis (Rodrigues).
inline Mat3 axis_rotation(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

/// Extrinsic XYZ Euler angles (roll about x, then pitch about world y, then yaw about world z).
inline Mat3 rpy_to_matrix(double roll, double pitch, double yaw) {
  return (Eigen::AngleAxisd(yaw, Vec3::UnitZ()) * Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
          Eigen::AngleAxisd(roll, Vec3::UnitX()))
      .toRotationMatrix();
}

/// Rotation log map: axis-angle vector of R, magnitude in [0, π].
inline Vec3 rotation_log(const Mat3& rot) {
  Eigen::AngleAxisd aa(rot);
  return aa.angle() * aa.axis();
}

/// Closed interval; defaults to (-inf, inf).
struct Interval {
  double lower = -kInf;
  double upper = kInf;

  bool empty() const { return lower > upper; }
  bool contains(double v) const { return v >= lower && v <= upper; }
  double clamp(double v) const { return std::min(std::max(v, lower), upper); }
  bool is_finite() const { return std::isfinite(lower) && std::isfinite(upper); }
};

/// Halton low-discrepancy sequence value for a 0-based index and prime base.
inline double halton(std::uint64_t index, unsigned base) {
  double f = 1.0;
  double r = 0.0;
  std::uint64_t i = index + 1;  // skip the leading zero of the sequence
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

inline unsigned nth_prime(unsigned n) {
  static constexpr unsigned kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                         41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
                                         97, 101, 103, 107, 109, 113, 127, 131, 137, 139,
                                         149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
                                         197, 199, 211, 223};
  if (n < sizeof(kPrimes) / sizeof(kPrimes[0])) return kPrimes[n];
  // fall back to trial division for very wide joint spaces
  unsigned count = sizeof(kPrimes) / sizeof(kPrimes[0]);
  unsigned candidate = kPrimes[count - 1];
  while (true) {
    ++candidate;
    bool prime = true;
    for (unsigned d = 2; d * d <= candidate; ++d) {
      if (candidate % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime && count++ == n) return candidate;
  }
}

}  // namespace ks

#endif  // KS_CORE_HPP
