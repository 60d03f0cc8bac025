// Density models, pole figures, and even-part reconstruction.
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "texradon/goniometry.hpp"
#include "texradon/rng.hpp"

using namespace texradon;

namespace {

std::vector<UnitVector<double>> random_directions(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<UnitVector<double>> h;
  for (int i = 0; i < count; ++i) h.push_back(rng.unit_vector());
  return h;
}

}  // namespace

TEST_SUITE("goniometry") {

TEST_CASE("measurement grid size, weights, and consistency") {
  const auto h = UnitVector<double>::from_polar(0.4, 1.0);
  const auto grid = make_polar_grid(h, 6);
  CHECK(grid.size() == std::size_t(7) * std::size_t(13));
  double wsum = 0;
  for (double w : grid.weight) wsum += w;
  CHECK(wsum == doctest::Approx(4 * pi_v<double>).epsilon(1e-13));
  CHECK_NOTHROW(grid.check_consistent());
  for (std::size_t j = 0; j < grid.size(); j += 17) {
    const auto r = grid.direction(j);
    CHECK(r.theta() == doctest::Approx(grid.theta[j]).epsilon(1e-12));
  }
  PoleFigureGrid<double> broken = grid;
  broken.phi.pop_back();
  CHECK_THROWS_AS(broken.check_consistent(), DataError);
}

TEST_CASE("figure mean requires weights") {
  SO3Coeffs<double> c(2);
  c(0, 0, 0) = 1.0;
  auto fig = pole_figure(c, UnitVector<double>(0, 0, 1));
  CHECK(pole_figure_mean(fig) == doctest::Approx(1.0).epsilon(1e-13));
  fig.weight.clear();
  CHECK_THROWS_AS(pole_figure_mean(fig), DataError);
}

TEST_CASE("uniform model is the single constant coefficient") {
  OdfModel<double> model;
  model.kind = OdfKind::Uniform;
  model.bandlimit = 4;
  const auto c = make_odf(model);
  SO3Coeffs<double> expected(4);
  expected(0, 0, 0) = 1.0;
  CHECK(c.max_abs_diff(expected) == 0.0);

  // Zero concentration degrades the unimodal model to uniform.
  model.kind = OdfKind::Unimodal;
  model.concentration = 0.0;
  CHECK(make_odf(model).max_abs_diff(expected) == 0.0);
}

TEST_CASE("unimodal model: normalization, realness, nonnegativity, peak") {
  OdfModel<double> model;
  model.kind = OdfKind::Unimodal;
  model.concentration = 2.0;
  model.bandlimit = 8;
  model.center = euler_to_rotation(0.9, 0.6, -1.3);
  const auto c = make_odf(model);
  CHECK(std::abs(c(0, 0, 0) - 1.0) < 1e-12);   // unit mean
  CHECK(realness_defect(c) < 1e-12);
  CHECK(odf_grid_min(c) >= -1e-12);            // squared kernel stays >= 0

  // The density peaks at the model center.
  Rng rng(61);
  const double peak = std::real(so3_synthesize(c, model.center));
  CHECK(peak > 1.0);
  for (int k = 0; k < 25; ++k)
    CHECK(std::real(so3_synthesize(c, rng.rotation())) < peak + 1e-12);
}

TEST_CASE("recentering shifts arguments") {
  OdfModel<double> centered;
  centered.kind = OdfKind::Unimodal;
  centered.concentration = 2.0;
  centered.bandlimit = 8;
  const auto c0 = make_odf(centered);

  OdfModel<double> moved = centered;
  moved.center = euler_to_rotation(2.2, 0.8, 0.5);
  const auto c1 = make_odf(moved);

  Rng rng(62);
  for (int k = 0; k < 15; ++k) {
    const auto g = rng.rotation();
    const std::complex<double> lhs = so3_synthesize(c1, moved.center * g);
    const std::complex<double> rhs = so3_synthesize(c0, g);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("band limit must resolve the concentration") {
  CHECK(unimodal_min_bandlimit(0.0) == 0);
  CHECK(unimodal_min_bandlimit(2.0) == 8);
  CHECK(unimodal_min_bandlimit(2.0) <= unimodal_min_bandlimit(6.0));

  OdfModel<double> model;
  model.kind = OdfKind::Unimodal;
  model.concentration = 2.0;
  model.bandlimit = 7;
  CHECK_THROWS_WITH_AS(make_odf(model),
                       doctest::Contains("need at least 8"), ModelError);
  model.bandlimit = 8;
  CHECK_NOTHROW(make_odf(model));
  model.concentration = -1.0;
  CHECK_THROWS_AS(make_odf(model), ModelError);
}

TEST_CASE("pole figure values match the direct symmetrized transform") {
  Rng rng(63);
  const auto c = rng.so3_coeffs(4, true, true);
  const auto h = rng.unit_vector();
  const auto fig = pole_figure(c, h);
  const auto raw = pole_figure(c, h, /*raw=*/true);
  const auto B = radon_harmonic(c);
  for (std::size_t j = 0; j < fig.size(); j += 7) {
    const auto r = fig.direction(j);
    const double plus = std::real(s2s2_synthesize(B, h, r));
    const double minus = std::real(s2s2_synthesize(B, -h, r));
    CHECK(fig.values[Eigen::Index(j)] ==
          doctest::Approx((plus + minus) / 2).epsilon(1e-11));
    CHECK(raw.values[Eigen::Index(j)] == doctest::Approx(plus).epsilon(1e-11));
  }
  // Friedel symmetry: the symmetrized figure cannot tell h from -h.
  const auto fig_m = pole_figure(c, -h);
  CHECK((fig.values - fig_m.values).cwiseAbs().maxCoeff() < 1e-11);
  // Densities have unit-mean figures.
  CHECK(pole_figure_mean(fig) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("odd-degree densities are invisible to symmetrized figures") {
  Rng rng(64);
  auto c = rng.so3_coeffs(5, /*real_valued=*/true);
  for (int l = 0; l <= 5; l += 2) c.block(l).setZero();  // odd degrees only
  const auto h = rng.unit_vector();
  const auto fig = pole_figure(c, h);
  CHECK(fig.values.cwiseAbs().maxCoeff() < 1e-12);
  const auto raw = pole_figure(c, h, /*raw=*/true);
  CHECK(raw.values.cwiseAbs().maxCoeff() > 1e-3);  // one-sided data sees them
}

TEST_CASE("even projector zeroes odd blocks and is idempotent") {
  Rng rng(65);
  const auto c = rng.so3_coeffs(5);
  const auto e = even_projector(c);
  for (int l = 0; l <= 5; ++l) {
    if (l % 2 == 0)
      CHECK((e.block(l) - c.block(l)).cwiseAbs().maxCoeff() == 0.0);
    else
      CHECK(e.block(l).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(even_projector(e).max_abs_diff(e) == 0.0);
}

TEST_CASE("reconstruction recovers the even part with enough directions") {
  Rng rng(66);
  const int L = 4;
  const auto c = rng.so3_coeffs(L, true, true);
  const auto dirs = random_directions(2 * L + 1, 67);
  std::vector<PoleFigureGrid<double>> figs;
  for (const auto& h : dirs) figs.push_back(pole_figure(c, h));

  const auto res = reconstruct_even(figs, L);
  CHECK(res.report.fully_determined());
  CHECK(res.report.rank == res.report.unknowns);
  CHECK(res.report.unknowns == 1 + 25 + 81);
  CHECK(res.coeffs.max_abs_diff(even_projector(c)) < 1e-8);
  for (double rms : res.report.figure_rms) CHECK(rms < 1e-10);

  // The Gram-matrix route agrees on the identifiable subspace (here: all).
  ReconstructOptions<double> opts;
  opts.method = ReconstructMethod::NormalEquations;
  const auto res2 = reconstruct_even(figs, L, opts);
  CHECK(res2.coeffs.max_abs_diff(res.coeffs) < 1e-7);
}

TEST_CASE("rank reporting and idempotency with few directions") {
  Rng rng(68);
  const int L = 4;
  const auto c = rng.so3_coeffs(L, true, true);
  const auto dirs = random_directions(3, 69);
  std::vector<PoleFigureGrid<double>> figs;
  for (const auto& h : dirs) figs.push_back(pole_figure(c, h));

  const auto res = reconstruct_even(figs, L);
  // Three directions span min(3, 2l+1) of the 2l+1 row modes per degree.
  CHECK(res.report.rank == 1 * 1 + 3 * 5 + 3 * 9);
  CHECK_FALSE(res.report.fully_determined());
  CHECK(res.report.summary().find("degree 4") != std::string::npos);
  for (double rms : res.report.figure_rms) CHECK(rms < 1e-10);

  // The minimum-norm solution is reproducible from its own figures.
  std::vector<PoleFigureGrid<double>> figs2;
  for (const auto& h : dirs) figs2.push_back(pole_figure(res.coeffs, h));
  const auto res2 = reconstruct_even(figs2, L);
  CHECK(res2.coeffs.max_abs_diff(res.coeffs) < 1e-8);
}

TEST_CASE("reconstruction rejects unusable data") {
  const int L = 4;
  CHECK_THROWS_AS(reconstruct_even<double>({}, L), DataError);

  SO3Coeffs<double> c(L);
  c(0, 0, 0) = 1.0;
  const UnitVector<double> h(0, 0, 1);
  auto good = pole_figure(c, h);

  auto nan_fig = good;
  nan_fig.values[3] = std::nan("");
  CHECK_THROWS_AS(reconstruct_even<double>({nan_fig}, L), DataError);

  auto empty_fig = good;
  empty_fig.theta.clear();
  empty_fig.phi.clear();
  empty_fig.weight.clear();
  empty_fig.values.resize(0);
  CHECK_THROWS_AS(reconstruct_even<double>({empty_fig}, L), DataError);

  // A coarse specimen grid cannot resolve band 4 data.
  auto sparse = pole_figure(c, h, make_polar_grid(h, 1));
  CHECK_THROWS_WITH_AS(reconstruct_even<double>({sparse}, L),
                       doctest::Contains("determines only"), DataError);
  ReconstructOptions<double> lax;
  lax.check_grids = false;
  CHECK_NOTHROW(reconstruct_even<double>({sparse}, L, lax));
}

TEST_CASE("residuals expose inconsistent data") {
  Rng rng(70);
  const int L = 2;
  const auto c = rng.so3_coeffs(L, true, true);
  auto fig = pole_figure(c, rng.unit_vector());
  for (Eigen::Index j = 0; j < fig.values.size(); ++j)
    fig.values[j] += rng.uniform(-0.05, 0.05);
  const auto res = reconstruct_even<double>({fig}, L);
  CHECK(res.report.figure_rms[0] > 1e-4);
  CHECK(res.report.figure_rms[0] < 0.1);
}

}  // TEST_SUITE
