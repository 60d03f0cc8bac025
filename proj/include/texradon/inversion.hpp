// Inversion of the circle transform.
//
// Two exact routes are provided for band-limited input:
//
//   1. Slice route: per-degree identity between pair coefficients and
//      rotation coefficients (invert_slice), the inverse of radon_harmonic.
//   2. Backprojection route: the dual transform damps degree l by the
//      symbol kappa_l; composing with the square-root Laplacian multiplier
//      mu_l = 2l+1 (the degree-l eigenvalue of both (1 - 2*Lap_{S2xS2})^{1/2}
//      and (1 - 4*Lap_{SO3})^{1/2}) undoes the damping exactly.
//
// The symbol kappa_l = 1/(2l+1) was measured once against the implemented
// transforms (calibrate_dual_symbol) and is frozen here as
// dual_radon_symbol_reference; invert_backprojection re-measures a few low
// degrees by default and refuses to run if the code paths have drifted.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "texradon/error.hpp"
#include "texradon/harmonics.hpp"
#include "texradon/radon.hpp"
#include "texradon/rng.hpp"

namespace texradon {

// Degree-l eigenvalue of the square-root shifted Laplacian multipliers:
// (1 - 2*Lap)^{1/2} on diagonal-degree pair functions and
// (1 - 4*Lap)^{1/2} on rotation functions both scale degree l by 2l+1.
template <typename Scalar = double>
constexpr Scalar sqrt_laplacian_multiplier(int l) {
  return Scalar(2 * l + 1);
}

// Apply (1 - 2*Lap_{S2xS2})^{1/2} to a diagonal-degree pair table.
template <typename Scalar>
PairCoeffs<Scalar> sqrt_multiplier_s2s2(const PairCoeffs<Scalar>& p) {
  PairCoeffs<Scalar> out = p;
  for (int l = 0; l <= out.bandlimit(); ++l)
    out.block(l) *= sqrt_laplacian_multiplier<Scalar>(l);
  return out;
}

// Apply (1 - 4*Lap_{SO3})^{1/2} to a rotation coefficient table.
template <typename Scalar>
SO3Coeffs<Scalar> sqrt_multiplier_so3(const SO3Coeffs<Scalar>& c) {
  SO3Coeffs<Scalar> out = c;
  for (int l = 0; l <= out.bandlimit(); ++l)
    out.block(l) *= sqrt_laplacian_multiplier<Scalar>(l);
  return out;
}

// Slice inversion: recover rotation coefficients from the pair coefficients
// of a transformed function. Exact inverse of radon_harmonic.
template <typename Scalar>
SO3Coeffs<Scalar> invert_slice(const PairCoeffs<Scalar>& p) {
  SO3Coeffs<Scalar> c(p.bandlimit());
  const Scalar four_pi = Scalar(4) * pi_v<Scalar>;
  for (int l = 0; l <= p.bandlimit(); ++l) c.block(l) = four_pi * p.block(l);
  return c;
}

// Frozen reference symbol of dual_radon . radon on degree l.
template <typename Scalar = double>
constexpr Scalar dual_radon_symbol_reference(int l) {
  return Scalar(1) / Scalar(2 * l + 1);
}

struct CalibrationOptions {
  int probes = 6;              // rotations at which the ratio is sampled
  std::uint64_t seed = 0x7472616e73ULL;
  double scalar_tol = 1e-8;    // max allowed non-scalar response
};

namespace detail {

// Measure the action of dual_radon . radon on one coefficient slot (l, m, n):
// returns the least-squares proportionality constant over probe rotations and
// the relative size of the non-proportional remainder.
template <typename Scalar>
std::pair<Scalar, Scalar> probe_symbol(int l, int m, int n,
                                       const CalibrationOptions& opts) {
  using Complex = std::complex<Scalar>;
  SO3Coeffs<Scalar> c(l);
  c(l, m, n) = Complex(1);
  const PairCoeffs<Scalar> p = radon_harmonic(c);
  const auto forward = [&](const UnitVector<Scalar>& h,
                           const UnitVector<Scalar>& r) {
    return s2s2_synthesize(p, h, r);
  };

  // Draw a surplus of probe rotations deterministically and keep those where
  // the input function is largest, so the ratio is well conditioned.
  Rng rng(opts.seed + std::uint64_t(l) * 1315423911ULL + std::uint64_t(m + l) * 2654435761ULL +
          std::uint64_t(n + l));
  const int surplus = 4 * opts.probes;
  std::vector<Rotation<Scalar>> pool;
  std::vector<Complex> fvals;
  pool.reserve(surplus);
  fvals.reserve(surplus);
  for (int k = 0; k < surplus; ++k) {
    const Rotation<double> gd = rng.rotation();
    const Rotation<Scalar> g(Scalar(gd.quat().w()), Scalar(gd.quat().x()),
                             Scalar(gd.quat().y()), Scalar(gd.quat().z()));
    pool.push_back(g);
    fvals.push_back(so3_synthesize(c, g));
  }
  std::vector<int> order(pool.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = int(k);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(fvals[a]) > std::abs(fvals[b]);
  });

  Complex num(0), den(0);
  std::vector<Complex> fs(opts.probes), bs(opts.probes);
  for (int k = 0; k < opts.probes; ++k) {
    const int idx = order[k];
    fs[k] = fvals[idx];
    bs[k] = dual_radon(forward, pool[idx], 2 * l);
    num += std::conj(fs[k]) * bs[k];
    den += std::conj(fs[k]) * fs[k];
  }
  if (std::abs(den) == Scalar(0))
    throw CalibrationError("calibration probes all landed on zeros of the test function");
  const Complex kappa = num / den;

  Scalar max_f = 0, max_rem = 0;
  for (int k = 0; k < opts.probes; ++k) {
    max_f = std::max(max_f, std::abs(fs[k]));
    max_rem = std::max(max_rem, std::abs(bs[k] - kappa * fs[k]));
  }
  const Scalar defect = max_f > Scalar(0) ? max_rem / max_f : Scalar(0);
  return {kappa.real(), std::max(defect, std::abs(kappa.imag()))};
}

}  // namespace detail

// Measure the per-degree symbol of dual_radon . radon up to degree L.
// Each degree is probed on two independent coefficient slots; the action must
// be scalar (same constant on both slots, no non-proportional response),
// otherwise CalibrationError is thrown.
template <typename Scalar = double>
std::vector<Scalar> calibrate_dual_symbol(int L,
                                          const CalibrationOptions& opts = {}) {
  limits::check_bandlimit(L);
  std::vector<Scalar> kappa(std::size_t(L) + 1);
  for (int l = 0; l <= L; ++l) {
    const int m0 = std::min(l, 1), n0 = -std::min(l, 1);
    const auto [k_a, defect_a] = detail::probe_symbol<Scalar>(l, 0, 0, opts);
    const auto [k_b, defect_b] =
        l == 0 ? std::pair<Scalar, Scalar>{k_a, defect_a}
               : detail::probe_symbol<Scalar>(l, m0, n0, opts);
    const Scalar scale = std::max(std::abs(k_a), Scalar(1));
    const Scalar defect =
        std::max({defect_a, defect_b, std::abs(k_a - k_b) / scale});
    if (!(defect <= Scalar(opts.scalar_tol)))
      throw CalibrationError(
          "dual transform does not act as a scalar on degree " +
          std::to_string(l) + " (defect " + std::to_string(double(defect)) + ")");
    kappa[std::size_t(l)] = (k_a + k_b) / Scalar(2);
  }
  return kappa;
}

struct BackprojectionOptions {
  bool check_calibration = true;  // re-measure low degrees before inverting
  int check_degree = 2;           // highest degree re-measured
  double drift_tol = 1e-6;        // allowed relative drift from the reference
  CalibrationOptions calibration{};
};

// Backprojection inversion: analyze the dual transform of F and undo the
// per-degree damping with the square-root Laplacian multiplier and the frozen
// symbol. F is any callable (h, r) -> value; it is evaluated on quadrature
// grids exact through band 2L, so the result is exact for band-limited data.
template <typename Scalar, typename F>
SO3Coeffs<Scalar> invert_backprojection(F&& f, int L,
                                        const BackprojectionOptions& opts = {}) {
  limits::check_bandlimit(L);
  if (opts.check_calibration) {
    const int lcheck = std::min(L, opts.check_degree);
    const std::vector<Scalar> measured =
        calibrate_dual_symbol<Scalar>(lcheck, opts.calibration);
    for (int l = 0; l <= lcheck; ++l) {
      const Scalar ref = dual_radon_symbol_reference<Scalar>(l);
      const Scalar drift = std::abs(measured[std::size_t(l)] - ref) / ref;
      if (!(drift <= Scalar(opts.drift_tol)))
        throw CalibrationError("dual transform symbol drifted from its frozen value at degree " +
                               std::to_string(l) + " (relative drift " +
                               std::to_string(double(drift)) + ")");
    }
  }
  SO3Coeffs<Scalar> b = so3_analyze<Scalar>(
      [&](const Rotation<Scalar>& g) { return dual_radon(f, g, 2 * L); }, L);
  // mu_l * kappa_l = 1 for the frozen symbol, so the multiplier alone undoes
  // the damping of the dual transform.
  for (int l = 0; l <= L; ++l)
    b.block(l) *= sqrt_laplacian_multiplier<Scalar>(l);
  return b;
}

}  // namespace texradon
