// Rotations, directions, and the fiber parametrization.
//
// Conventions used throughout the library:
//   * A Rotation g acts on directions by quaternion conjugation, v -> q v q*.
//   * Euler angles are Z-Y-Z: g = R_z(alpha) R_y(beta) R_z(gamma).
//   * g relates specimen and crystal coordinates of one physical direction
//     by h = g r (h crystal, r specimen).  The physical orientation of the
//     crystal as an active rotation is the inverse, g^{-1}.
//   * The group carries the Haar probability measure dg; the Riemannian
//     volume element sin(beta) dalpha dbeta dgamma equals 8 pi^2 dg.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>
#include <limits>
#include <numbers>

#include "texradon/error.hpp"

namespace texradon {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

template <typename Scalar>
inline constexpr Scalar pi_v = std::numbers::pi_v<Scalar>;

// Ratio between the Riemannian volume element sin(beta) da db dc and the
// Haar probability measure dg.
template <typename Scalar>
inline constexpr Scalar haar_volume_ratio = Scalar(8) * pi_v<Scalar> * pi_v<Scalar>;

// A direction on the unit sphere.  Construction normalizes; a zero vector is
// rejected.  Negation is exact (componentwise sign flip, no renormalization),
// which keeps antipodal symmetries bitwise.
template <typename Scalar = double>
class UnitVector {
 public:
  UnitVector() : v_(Scalar(0), Scalar(0), Scalar(1)) {}

  explicit UnitVector(const Vec3<Scalar>& v) : v_(v) {
    const Scalar n = v_.norm();
    if (!(n > Scalar(0)) || !std::isfinite(n))
      throw NumericError("cannot normalize zero or non-finite vector");
    v_ /= n;
  }

  UnitVector(Scalar x, Scalar y, Scalar z) : UnitVector(Vec3<Scalar>(x, y, z)) {}

  static UnitVector from_polar(Scalar theta, Scalar phi) {
    const Scalar st = std::sin(theta);
    UnitVector u;
    u.v_ = Vec3<Scalar>(st * std::cos(phi), st * std::sin(phi), std::cos(theta));
    return u;
  }

  // Adopts components that are already unit length (within tol) without
  // renormalizing, so deserialized directions keep their exact bits.
  static UnitVector from_normalized(const Vec3<Scalar>& v,
                                    Scalar tol = Scalar(1e-12)) {
    const Scalar n = v.norm();
    if (!std::isfinite(n) || std::abs(n - Scalar(1)) > tol)
      throw NumericError("vector is not unit length");
    UnitVector u;
    u.v_ = v;
    return u;
  }

  const Vec3<Scalar>& vec() const { return v_; }
  Scalar x() const { return v_.x(); }
  Scalar y() const { return v_.y(); }
  Scalar z() const { return v_.z(); }

  // Polar angle in [0, pi]; azimuth via atan2 (0 at the poles).
  Scalar theta() const { return std::atan2(std::hypot(v_.x(), v_.y()), v_.z()); }
  Scalar phi() const {
    return (v_.x() == Scalar(0) && v_.y() == Scalar(0)) ? Scalar(0)
                                                        : std::atan2(v_.y(), v_.x());
  }

  Scalar dot(const UnitVector& o) const { return v_.dot(o.v_); }

  UnitVector operator-() const {
    UnitVector u;
    u.v_ = -v_;
    return u;
  }

 private:
  Vec3<Scalar> v_;
};

// Z-Y-Z Euler angles.  Canonical ranges: alpha, gamma in [0, 2pi),
// beta in [0, pi].  Any finite triple is accepted as input to
// euler_to_rotation; conversions from Rotation always emit canonical angles.
template <typename Scalar = double>
struct EulerZYZ {
  Scalar alpha{};
  Scalar beta{};
  Scalar gamma{};
};

// A proper rotation stored as a unit quaternion.  q and -q represent the
// same rotation; equality comparisons are up to that sign.  Composition
// renormalizes so that long product chains stay on the unit sphere.
template <typename Scalar = double>
class Rotation {
 public:
  using Quat = Eigen::Quaternion<Scalar>;

  Rotation() : q_(Quat::Identity()) {}

  explicit Rotation(const Quat& q) : q_(q) { normalize(); }

  Rotation(Scalar w, Scalar x, Scalar y, Scalar z) : q_(w, x, y, z) { normalize(); }

  static Rotation identity() { return Rotation(); }

  static Rotation from_axis_angle(const UnitVector<Scalar>& axis, Scalar angle) {
    const Scalar half = angle / Scalar(2);
    const Scalar s = std::sin(half);
    Rotation g;
    g.q_ = Quat(std::cos(half), s * axis.x(), s * axis.y(), s * axis.z());
    return g;  // already unit length
  }

  static Rotation about_z(Scalar angle) {
    Rotation g;
    g.q_ = Quat(std::cos(angle / 2), Scalar(0), Scalar(0), std::sin(angle / 2));
    return g;
  }

  static Rotation about_y(Scalar angle) {
    Rotation g;
    g.q_ = Quat(std::cos(angle / 2), Scalar(0), std::sin(angle / 2), Scalar(0));
    return g;
  }

  const Quat& quat() const { return q_; }

  Rotation operator*(const Rotation& rhs) const { return Rotation(q_ * rhs.q_); }

  Rotation inverse() const {
    Rotation g;
    g.q_ = q_.conjugate();  // unit quaternion: conjugate == inverse
    return g;
  }

  UnitVector<Scalar> apply(const UnitVector<Scalar>& v) const {
    UnitVector<Scalar> out;
    // Quaternion sandwich q v q*; result of rotating a unit vector is unit
    // up to rounding, renormalize through the checked constructor.
    out = UnitVector<Scalar>(q_ * v.vec());
    return out;
  }

  Mat3<Scalar> matrix() const { return q_.toRotationMatrix(); }

  // Rotation angle in [0, pi].
  Scalar angle() const {
    const Scalar w = std::min(Scalar(1), std::abs(q_.w()));
    return Scalar(2) * std::acos(w);
  }

  // Equality up to the q ~ -q identification.
  bool approx_equal(const Rotation& o, Scalar tol) const {
    const Scalar dplus = (q_.coeffs() - o.q_.coeffs()).norm();
    const Scalar dminus = (q_.coeffs() + o.q_.coeffs()).norm();
    return std::min(dplus, dminus) <= tol;
  }

 private:
  void normalize() {
    const Scalar n = q_.norm();
    if (!(n > Scalar(0)) || !std::isfinite(n))
      throw NumericError("cannot normalize zero or non-finite quaternion");
    q_.coeffs() /= n;
  }

  Quat q_;
};

// Geodesic (misorientation) angle between two rotations.
template <typename Scalar>
Scalar geodesic_distance(const Rotation<Scalar>& a, const Rotation<Scalar>& b) {
  return (a.inverse() * b).angle();
}

template <typename Scalar>
UnitVector<Scalar> rotate(const Rotation<Scalar>& g, const UnitVector<Scalar>& v) {
  return g.apply(v);
}

template <typename Scalar>
Rotation<Scalar> euler_to_rotation(const EulerZYZ<Scalar>& e) {
  if (!std::isfinite(e.alpha) || !std::isfinite(e.beta) || !std::isfinite(e.gamma))
    throw NumericError("Euler angles must be finite");
  return Rotation<Scalar>::about_z(e.alpha) * Rotation<Scalar>::about_y(e.beta) *
         Rotation<Scalar>::about_z(e.gamma);
}

template <typename Scalar>
Rotation<Scalar> euler_to_rotation(Scalar alpha, Scalar beta, Scalar gamma) {
  return euler_to_rotation(EulerZYZ<Scalar>{alpha, beta, gamma});
}

namespace detail {
template <typename Scalar>
Scalar wrap_two_pi(Scalar a) {
  const Scalar two_pi = Scalar(2) * pi_v<Scalar>;
  a = std::fmod(a, two_pi);
  if (a < Scalar(0)) a += two_pi;
  if (a >= two_pi) a = Scalar(0);  // fmod rounding at the seam
  return a;
}
}  // namespace detail

// Canonical Z-Y-Z angles of g.  At the gimbal seams (beta = 0 or pi) only
// a combination of alpha and gamma is determined; gamma is set to 0 there.
template <typename Scalar>
EulerZYZ<Scalar> rotation_to_euler(const Rotation<Scalar>& g) {
  const Mat3<Scalar> R = g.matrix();
  EulerZYZ<Scalar> e;
  // R(2,2) = cos(beta); guard against rounding outside [-1, 1].
  const Scalar cb = std::max(Scalar(-1), std::min(Scalar(1), R(2, 2)));
  const Scalar sb = std::hypot(R(0, 2), R(1, 2));
  e.beta = std::atan2(sb, cb);
  // Branch threshold ~ sqrt(machine eps): below it the generic formulas
  // amplify entry rounding like eps/sb, while the merged-angle seam formulas
  // err only like sb, so the crossover minimizes the worst round-trip error.
  const Scalar seam = std::sqrt(std::numeric_limits<Scalar>::epsilon());
  if (sb > seam) {
    e.alpha = std::atan2(R(1, 2), R(0, 2));
    e.gamma = std::atan2(R(2, 1), -R(2, 0));
  } else {
    // beta ~ 0: R = R_z(alpha + gamma); beta ~ pi: R = R_z(alpha - gamma) R_y(pi).
    e.gamma = Scalar(0);
    e.alpha = (cb > Scalar(0)) ? std::atan2(R(1, 0), R(0, 0))
                               : std::atan2(R(1, 0), -R(0, 0));
  }
  e.alpha = detail::wrap_two_pi(e.alpha);
  e.gamma = detail::wrap_two_pi(e.gamma);
  if (e.beta < Scalar(0)) e.beta = Scalar(0);
  if (e.beta > pi_v<Scalar>) e.beta = pi_v<Scalar>;
  return e;
}

// Canonical representative of the same rotation.
template <typename Scalar>
EulerZYZ<Scalar> canonical(const EulerZYZ<Scalar>& e) {
  return rotation_to_euler(euler_to_rotation(e));
}

// Parametrizes the fiber {g : g r = h}, a circle in SO(3), by
// g(t) = g0 * R(r, t) where g0 is the shortest-arc rotation taking r to h
// and R(r, t) is the rotation of angle t about r.  As t sweeps [0, 2pi) the
// fiber is traced exactly once, continuously in t.
//
// When h is antipodal to r (within 1e-9) the shortest arc is degenerate and
// a deterministic half-turn axis is used: the component of e1 orthogonal to
// r, or of e2 when r is nearly parallel to e1 (|r . e1| > 1 - 1e-6).
template <typename Scalar>
Rotation<Scalar> fiber_rotation(const UnitVector<Scalar>& h,
                                const UnitVector<Scalar>& r, Scalar t) {
  const Scalar d = r.dot(h);
  Rotation<Scalar> g0;
  if (d <= Scalar(-1) + Scalar(1e-9)) {
    Vec3<Scalar> axis;
    if (std::abs(r.x()) > Scalar(1) - Scalar(1e-6))
      axis = Vec3<Scalar>(Scalar(0), Scalar(1), Scalar(0)) - r.y() * r.vec();
    else
      axis = Vec3<Scalar>(Scalar(1), Scalar(0), Scalar(0)) - r.x() * r.vec();
    g0 = Rotation<Scalar>::from_axis_angle(UnitVector<Scalar>(axis), pi_v<Scalar>);
  } else {
    // Shortest-arc quaternion (1 + r.h, r x h), normalized.
    const Vec3<Scalar> c = r.vec().cross(h.vec());
    g0 = Rotation<Scalar>(Scalar(1) + d, c.x(), c.y(), c.z());
  }
  return g0 * Rotation<Scalar>::from_axis_angle(r, t);
}

}  // namespace texradon
