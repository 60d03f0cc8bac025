// Slice and backprojection inversion, symbol calibration, and the
// square-root Laplacian multiplier checked against finite differences.
#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "texradon/inversion.hpp"
#include "texradon/rng.hpp"

using namespace texradon;

TEST_SUITE("inversion") {

TEST_CASE("multiplier values") {
  CHECK(sqrt_laplacian_multiplier<double>(0) == 1.0);
  CHECK(sqrt_laplacian_multiplier<double>(1) == 3.0);
  CHECK(sqrt_laplacian_multiplier<double>(7) == 15.0);
  CHECK(dual_radon_symbol_reference<double>(0) == 1.0);
  CHECK(dual_radon_symbol_reference<double>(3) == doctest::Approx(1.0 / 7.0));
  // The two are exact reciprocals at every degree.
  for (int l = 0; l <= 64; ++l)
    CHECK(sqrt_laplacian_multiplier<double>(l) *
              dual_radon_symbol_reference<double>(l) ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("slice inversion is the exact inverse of the harmonic transform") {
  Rng rng(51);
  const auto c = rng.so3_coeffs(16, /*real_valued=*/false);
  const auto back = invert_slice(radon_harmonic(c));
  CHECK(back.max_abs_diff(c) < 1e-13);
  // And in the other composition order.
  const auto p = radon_harmonic(c);
  CHECK(radon_harmonic(invert_slice(p)).max_abs_diff(p) < 1e-13);
}

TEST_CASE("multiplier application scales blocks") {
  Rng rng(52);
  const auto c = rng.so3_coeffs(4);
  const auto mc = sqrt_multiplier_so3(c);
  for (int l = 0; l <= 4; ++l)
    CHECK((mc.block(l) - double(2 * l + 1) * c.block(l)).cwiseAbs().maxCoeff() <
          1e-15);
  const auto p = radon_harmonic(c);
  const auto mp = sqrt_multiplier_s2s2(p);
  for (int l = 0; l <= 4; ++l)
    CHECK((mp.block(l) - double(2 * l + 1) * p.block(l)).cwiseAbs().maxCoeff() <
          1e-15);
}

TEST_CASE("measured symbol matches the frozen reference") {
  const auto kappa = calibrate_dual_symbol<double>(4);
  for (int l = 0; l <= 4; ++l)
    CHECK(kappa[std::size_t(l)] ==
          doctest::Approx(dual_radon_symbol_reference<double>(l)).epsilon(1e-10));
}

TEST_CASE("backprojection inversion recovers random densities") {
  Rng rng(53);
  const int L = 6;
  const auto c = rng.so3_coeffs(L, true, true);
  const auto p = radon_harmonic(c);
  const auto F = [&](const UnitVector<double>& h, const UnitVector<double>& r) {
    return s2s2_synthesize(p, h, r);
  };
  const auto back = invert_backprojection<double>(F, L);
  CHECK(back.max_abs_diff(c) < 1e-12);
}

TEST_CASE("backprojection and slice routes agree from the same samples") {
  Rng rng(54);
  const int L = 5;
  const auto c = rng.so3_coeffs(L, true, true);
  const auto p = radon_harmonic(c);
  const auto F = [&](const UnitVector<double>& h, const UnitVector<double>& r) {
    return s2s2_synthesize(p, h, r);
  };
  const auto via_slice = invert_slice(s2s2_analyze<double>(F, L));
  BackprojectionOptions opts;
  opts.check_calibration = false;  // drift is covered by the calibration test
  const auto via_backprojection = invert_backprojection<double>(F, L, opts);
  CHECK(via_slice.max_abs_diff(via_backprojection) < 1e-12);
}

TEST_CASE("finite-difference Laplacians confirm the multiplier eigenvalues") {
  // On a degree-l pair harmonic F(h, r) = Y_l^m(h) conj(Y_l^n(r)) the sum of
  // the two sphere Laplacians has eigenvalue -2 l(l+1), so
  // sqrt(1 - 2 lambda) = 2l+1.  The same value arises on SO(3) from
  // sqrt(1 - 4 lambda') with lambda' = -l(l+1).
  const double eps = 1e-3;
  for (int l = 1; l <= 3; ++l) {
    // Pair side: probe where the function is not small.
    const auto hp = UnitVector<double>::from_polar(1.9, 0.4);
    const auto rp = UnitVector<double>::from_polar(0.8, -2.2);
    PairCoeffs<double> B(l);
    B(l, 0, 0) = 1.0;
    const auto F = [&](const UnitVector<double>& h, const UnitVector<double>& r) {
      return std::real(s2s2_synthesize(B, h, r));
    };
    const double f0 = F(hp, rp);
    REQUIRE(std::abs(f0) > 1e-3);
    const double lap_h = oracle::s2_laplacian_fd(
        [&](const UnitVector<double>& u) { return F(u, rp); }, hp, eps);
    const double lap_r = oracle::s2_laplacian_fd(
        [&](const UnitVector<double>& u) { return F(hp, u); }, rp, eps);
    const double lambda = (lap_h + lap_r) / f0;
    const double mu = std::sqrt(1 - 2 * lambda);
    CHECK(std::abs(mu / sqrt_laplacian_multiplier<double>(l) - 1) < 1e-4);

    // Rotation side.
    SO3Coeffs<double> c(l);
    c(l, std::min(l, 1), -std::min(l, 1)) = 1.0;
    symmetrize_real(c);
    const auto f = [&](const Rotation<double>& g) {
      return std::real(so3_synthesize(c, g));
    };
    const auto g0 = euler_to_rotation(0.7, 1.1, -0.4);
    REQUIRE(std::abs(f(g0)) > 1e-3);
    const double lap = oracle::so3_laplacian_fd(f, g0, eps);
    const double lambda_rot = lap / f(g0);
    const double mu_rot = std::sqrt(1 - 4 * lambda_rot);
    CHECK(std::abs(mu_rot / sqrt_laplacian_multiplier<double>(l) - 1) < 1e-4);
  }
}

TEST_CASE("band limit validation") {
  CHECK_THROWS_AS(calibrate_dual_symbol<double>(limits::max_bandlimit() + 1),
                  BandLimitError);
  const auto F = [](const UnitVector<double>&, const UnitVector<double>&) {
    return 1.0;
  };
  CHECK_THROWS_AS(invert_backprojection<double>(F, -1), BandLimitError);
}

}  // TEST_SUITE
