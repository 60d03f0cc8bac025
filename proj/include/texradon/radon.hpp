// The one-dimensional Radon transform on SO(3) and its companions.
//
//   (R f)(h, r) = 1/(2 pi) integral over the fiber {g : g r = h} of f,
//
// normalized so that R 1 = 1.  The fiber is the circle
// g(t) = fiber_rotation(h, r, t), t in [0, 2 pi).
//
// In harmonic form R acts blockwise: a table c on SO(3) maps to the pair
// table c / 4pi, i.e. SO(3) coefficients equal 4 pi times the pair
// coefficients of R f (the projection-slice identity; see harmonics.hpp for
// the conventions that make the constant come out as plain 4 pi).
//
// The dual transform averages a pair function over all crystal directions:
//
//   (R* F)(g) = 1/(4 pi) integral over h in S^2 of F(h, g^{-1} h).
//
// With these normalizations R* R acts on degree-l coefficients as the scalar
// 1/(2l+1) (measured and frozen in inversion.hpp).
#pragma once

#include <complex>
#include <type_traits>

#include "texradon/harmonics.hpp"
#include "texradon/quadrature.hpp"
#include "texradon/rotations.hpp"

namespace texradon {

inline constexpr int kDefaultFiberNodes = 256;

// Fiber-circle quadrature: the uniform (trapezoid) rule on the closed
// circle, spectrally accurate for smooth f.  Exact once the node count
// exceeds the azimuthal bandwidth of f along the fiber.
template <typename Scalar, class F>
auto radon_geometric(F&& f, const UnitVector<Scalar>& h, const UnitVector<Scalar>& r,
                     int nodes = kDefaultFiberNodes) {
  using Value = std::invoke_result_t<F&, const Rotation<Scalar>&>;
  if (nodes < 4) throw Error("fiber rule needs at least 4 nodes");
  Value sum{};
  for (int j = 0; j < nodes; ++j) {
    const Scalar t = Scalar(2) * pi_v<Scalar> * Scalar(j) / Scalar(nodes);
    const Value v = f(fiber_rotation(h, r, t));
    if (!std::isfinite(std::abs(std::complex<Scalar>(v))))
      throw NumericError("non-finite integrand on fiber node " + std::to_string(j));
    sum += v;
  }
  return sum / Scalar(nodes);
}

// Harmonic form of R: blockwise division by 4 pi, degrees preserved.
template <typename Scalar>
PairCoeffs<Scalar> radon_harmonic(const SO3Coeffs<Scalar>& c) {
  const Scalar four_pi = Scalar(4) * pi_v<Scalar>;
  PairCoeffs<Scalar> out(c.bandlimit());
  for (int l = 0; l <= c.bandlimit(); ++l) out.block(l) = c.block(l) / four_pi;
  return out;
}

// Dual transform at g: mass-1 average of F(h, g^{-1} h) over h in S^2,
// using the product rule exact to degree quad_band.  For F diagonal of band
// L the integrand has band <= 2L, so quad_band = 2L makes this exact.
template <typename Scalar, class F>
auto dual_radon(F&& f, const Rotation<Scalar>& g, int quad_band) {
  using Value =
      std::invoke_result_t<F&, const UnitVector<Scalar>&, const UnitVector<Scalar>&>;
  const auto rule = s2_quadrature<Scalar>(quad_band);
  const auto nodes = rule.s2_nodes();
  const auto w = rule.weights();
  const Rotation<Scalar> ginv = g.inverse();
  Value sum{};
  for (std::size_t i = 0; i < nodes.size(); ++i)
    sum += w[i] * f(nodes[i], rotate(ginv, nodes[i]));
  return sum / (Scalar(4) * pi_v<Scalar>);
}

// Independent formulation of the fiber integral: the fiber lifts to a great
// circle of unit quaternions (the double cover), traced as points of R^4 on
// the plane spanned by the lift q0 of the base rotation and q0 * (0, r).
// Averaging f over that circle with normalized arc length reproduces
// radon_geometric exactly; the two code paths share no quadrature logic.
template <typename Scalar, class F>
auto s3_circle_integral(F&& f, const UnitVector<Scalar>& h, const UnitVector<Scalar>& r,
                        int nodes = kDefaultFiberNodes) {
  using Value = std::invoke_result_t<F&, const Rotation<Scalar>&>;
  if (nodes < 4) throw Error("circle rule needs at least 4 nodes");
  using Vec4 = Eigen::Matrix<Scalar, 4, 1>;
  const Rotation<Scalar> g0 = fiber_rotation(h, r, Scalar(0));
  const auto& q0 = g0.quat();
  // Orthonormal plane basis in R^4: u = q0, v = q0 * (0, r).
  const Eigen::Quaternion<Scalar> qr(Scalar(0), r.x(), r.y(), r.z());
  const Eigen::Quaternion<Scalar> qv = q0 * qr;
  const Vec4 u = q0.coeffs();  // (x, y, z, w) order; consistent for both
  const Vec4 v = qv.coeffs();
  Value sum{};
  for (int j = 0; j < nodes; ++j) {
    const Scalar s = Scalar(2) * pi_v<Scalar> * Scalar(j) / Scalar(nodes);
    const Vec4 q = std::cos(s) * u + std::sin(s) * v;  // stays on the circle
    Eigen::Quaternion<Scalar> qq;
    qq.coeffs() = q;
    sum += f(Rotation<Scalar>(qq));
  }
  return sum / Scalar(nodes);
}

}  // namespace texradon
