// Product quadrature rules on S^2 and SO(3).
//
// Both rules combine Gauss-Legendre nodes in the polar cosine with uniform
// azimuthal grids, sized so that every harmonic of degree <= L is integrated
// exactly: L/2+1 polar nodes and L+1 azimuthal points.  Uniform azimuthal
// sums annihilate all nonzero Fourier modes up to |L|, and the surviving
// zonal part is a polynomial of degree <= L in the polar cosine.
//
// Weights are normalized to the measures used throughout: total mass 1 on
// SO(3) (Haar probability) and 4 pi on S^2 (surface area).
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "texradon/limits.hpp"
#include "texradon/rotations.hpp"

namespace texradon {

namespace detail {

// Gauss-Legendre nodes (ascending, in (-1,1)) and weights (summing to 2) by
// Newton iteration on the Legendre recurrence.
template <typename Scalar>
std::pair<std::vector<Scalar>, std::vector<Scalar>> gauss_legendre(int n) {
  std::vector<Scalar> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi-style initial guess, then Newton on P_n.
    Scalar z = std::cos(pi_v<Scalar> * (Scalar(i) + Scalar(0.75)) /
                        (Scalar(n) + Scalar(0.5)));
    Scalar pp = Scalar(0);
    for (int iter = 0; iter < 100; ++iter) {
      Scalar p0 = Scalar(1), p1 = Scalar(0);
      for (int j = 0; j < n; ++j) {
        const Scalar p2 = p1;
        p1 = p0;
        p0 = ((Scalar(2 * j + 1)) * z * p1 - Scalar(j) * p2) / Scalar(j + 1);
      }
      pp = Scalar(n) * (z * p0 - p1) / (z * z - Scalar(1));
      const Scalar dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < Scalar(1e-16)) break;
    }
    x[std::size_t(i)] = -z;
    x[std::size_t(n - 1 - i)] = z;
    const Scalar wi = Scalar(2) / ((Scalar(1) - z * z) * pp * pp);
    w[std::size_t(i)] = wi;
    w[std::size_t(n - 1 - i)] = wi;
  }
  return {std::move(x), std::move(w)};
}

// Shared cache for double-precision rules (thread-safe, keyed by n).
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre_cached(
    int n);

template <typename Scalar>
std::pair<std::vector<Scalar>, std::vector<Scalar>> gauss_legendre_get(int n) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return gauss_legendre_cached(n);
  } else {
    return gauss_legendre<Scalar>(n);
  }
}

}  // namespace detail

enum class QuadDomain { S2, SO3 };

template <typename Scalar = double>
struct QuadratureRule {
  QuadDomain domain{QuadDomain::S2};
  int bandlimit{0};
  std::vector<Scalar> polar_cos;  // Gauss-Legendre nodes in cos(theta|beta)
  std::vector<Scalar> polar_w;    // raw Gauss-Legendre weights (sum 2)
  int n_azimuth{1};               // phi count (S2); alpha and gamma count (SO3)

  int n_polar() const { return int(polar_cos.size()); }

  std::size_t size() const {
    const std::size_t az = std::size_t(n_azimuth);
    return domain == QuadDomain::S2 ? polar_cos.size() * az
                                    : polar_cos.size() * az * az;
  }

  Scalar azimuth(int k) const {
    return Scalar(2) * pi_v<Scalar> * Scalar(k) / Scalar(n_azimuth);
  }

  // Weight of any node on polar ring b (azimuthal factors included).
  Scalar ring_weight(int b) const {
    if (domain == QuadDomain::S2)
      return polar_w[std::size_t(b)] * (Scalar(2) * pi_v<Scalar>) /
             Scalar(n_azimuth);
    return polar_w[std::size_t(b)] /
           (Scalar(2) * Scalar(n_azimuth) * Scalar(n_azimuth));
  }

  Scalar total_weight() const {
    Scalar s = Scalar(0);
    for (int b = 0; b < n_polar(); ++b)
      s += ring_weight(b) * (domain == QuadDomain::S2
                                 ? Scalar(n_azimuth)
                                 : Scalar(n_azimuth) * Scalar(n_azimuth));
    return s;
  }

  std::vector<Scalar> weights() const {
    std::vector<Scalar> w;
    w.reserve(size());
    for (int b = 0; b < n_polar(); ++b) {
      const Scalar rw = ring_weight(b);
      const std::size_t reps = domain == QuadDomain::S2
                                   ? std::size_t(n_azimuth)
                                   : std::size_t(n_azimuth) * std::size_t(n_azimuth);
      for (std::size_t k = 0; k < reps; ++k) w.push_back(rw);
    }
    return w;
  }

  std::vector<UnitVector<Scalar>> s2_nodes() const {
    if (domain != QuadDomain::S2) throw Error("s2_nodes on an SO(3) rule");
    std::vector<UnitVector<Scalar>> pts;
    pts.reserve(size());
    for (int b = 0; b < n_polar(); ++b) {
      const Scalar ct = polar_cos[std::size_t(b)];
      const Scalar st = std::sqrt(std::max(Scalar(0), Scalar(1) - ct * ct));
      for (int k = 0; k < n_azimuth; ++k) {
        const Scalar phi = azimuth(k);
        pts.push_back(UnitVector<Scalar>(st * std::cos(phi), st * std::sin(phi), ct));
      }
    }
    return pts;
  }

  std::vector<Rotation<Scalar>> so3_nodes() const {
    if (domain != QuadDomain::SO3) throw Error("so3_nodes on an S^2 rule");
    std::vector<Rotation<Scalar>> pts;
    pts.reserve(size());
    for (int b = 0; b < n_polar(); ++b) {
      const Scalar beta = std::acos(std::max(Scalar(-1), std::min(Scalar(1),
                                    polar_cos[std::size_t(b)])));
      for (int a = 0; a < n_azimuth; ++a)
        for (int c = 0; c < n_azimuth; ++c)
          pts.push_back(euler_to_rotation(azimuth(a), beta, azimuth(c)));
    }
    return pts;
  }
};

// Rule integrating every S^2 harmonic of degree <= L exactly (mass 4 pi).
template <typename Scalar = double>
QuadratureRule<Scalar> s2_quadrature(int L) {
  limits::check_quadrature_bandlimit(L);
  QuadratureRule<Scalar> rule;
  rule.domain = QuadDomain::S2;
  rule.bandlimit = L;
  auto gl = detail::gauss_legendre_get<Scalar>(L / 2 + 1);
  rule.polar_cos = std::move(gl.first);
  rule.polar_w = std::move(gl.second);
  rule.n_azimuth = L + 1;
  return rule;
}

// Rule integrating every SO(3) harmonic of degree <= L exactly (mass 1).
template <typename Scalar = double>
QuadratureRule<Scalar> so3_quadrature(int L) {
  limits::check_quadrature_bandlimit(L);
  QuadratureRule<Scalar> rule;
  rule.domain = QuadDomain::SO3;
  rule.bandlimit = L;
  auto gl = detail::gauss_legendre_get<Scalar>(L / 2 + 1);
  rule.polar_cos = std::move(gl.first);
  rule.polar_w = std::move(gl.second);
  rule.n_azimuth = L + 1;
  return rule;
}

}  // namespace texradon
