// Texture goniometry: orientation density models, pole figures, and
// reconstruction of the even part of a density from pole figure data.
//
// A pole figure at crystal direction h samples the antipodally symmetrized
// circle transform P(h, r) = (Rf(h, r) + Rf(-h, r)) / 2 on a grid of
// specimen directions r.  Only even degrees survive the symmetrization, so
// reconstruction targets the even part of the density; the report states
// which coefficient subspaces the measured directions actually determine.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "texradon/error.hpp"
#include "texradon/harmonics.hpp"
#include "texradon/parallel.hpp"
#include "texradon/quadrature.hpp"
#include "texradon/radon.hpp"
#include "texradon/rotations.hpp"
#include "texradon/wigner.hpp"

namespace texradon {

// ---------------------------------------------------------------------------
// Pole figure container

// One pole figure: a crystal direction h, a grid of specimen directions
// (theta_j, phi_j), and one measured/computed value per grid point.
// weight, when non-empty, holds quadrature weights for the grid (summing to
// 4 pi); bandlimit and fiber_nodes record how computed values were produced.
template <typename Scalar = double>
struct PoleFigureGrid {
  UnitVector<Scalar> h;
  std::vector<Scalar> theta;
  std::vector<Scalar> phi;
  std::vector<Scalar> weight;
  VectorX<Scalar> values;

  int bandlimit = 0;
  int fiber_nodes = 0;

  std::size_t size() const { return theta.size(); }

  UnitVector<Scalar> direction(std::size_t j) const {
    return UnitVector<Scalar>::from_polar(theta[j], phi[j]);
  }

  void check_consistent() const {
    if (theta.size() != phi.size() || std::size_t(values.size()) != theta.size())
      throw DataError("pole figure grid arrays have mismatched lengths");
    if (!weight.empty() && weight.size() != theta.size())
      throw DataError("pole figure weight array has mismatched length");
  }
};

// Measurement grid resolving products of two band-L functions: Gauss-Legendre
// in cos(theta) (L+1 rings) times uniform azimuth (2L+1 points per ring).
template <typename Scalar = double>
PoleFigureGrid<Scalar> make_polar_grid(const UnitVector<Scalar>& h, int L) {
  const QuadratureRule<Scalar> rule = s2_quadrature<Scalar>(2 * L);
  PoleFigureGrid<Scalar> fig;
  fig.h = h;
  fig.bandlimit = L;
  const std::size_t n = rule.size();
  fig.theta.reserve(n);
  fig.phi.reserve(n);
  fig.weight.reserve(n);
  for (int b = 0; b < rule.n_polar(); ++b) {
    const Scalar th = std::acos(std::max(Scalar(-1), std::min(Scalar(1), rule.polar_cos[std::size_t(b)])));
    const Scalar w = rule.ring_weight(b);
    for (int k = 0; k < rule.n_azimuth; ++k) {
      fig.theta.push_back(th);
      fig.phi.push_back(rule.azimuth(k));
      fig.weight.push_back(w);
    }
  }
  fig.values = VectorX<Scalar>::Zero(Eigen::Index(n));
  return fig;
}

// Weighted mean of the figure over the sphere (1 for a density's figures).
// Requires quadrature weights.
template <typename Scalar>
Scalar pole_figure_mean(const PoleFigureGrid<Scalar>& fig) {
  fig.check_consistent();
  if (fig.weight.empty())
    throw DataError("pole figure carries no quadrature weights; cannot form a mean");
  Scalar acc = Scalar(0);
  for (std::size_t j = 0; j < fig.size(); ++j) acc += fig.weight[j] * fig.values[Eigen::Index(j)];
  return acc / (Scalar(4) * pi_v<Scalar>);
}

// ---------------------------------------------------------------------------
// Density models

enum class OdfKind { Uniform, Unimodal };

// Synthetic orientation density model.  Uniform is the constant density 1.
// Unimodal is a smooth band-limited bell centered at `center`: the square of
// a half-band zonal kernel with coefficient decay exp(-k(k+1)/concentration),
// hence nonnegative by construction and normalized to unit mean.  Larger
// concentration gives a sharper peak and needs a larger band limit.
template <typename Scalar = double>
struct OdfModel {
  OdfKind kind = OdfKind::Uniform;
  Rotation<Scalar> center{};
  Scalar concentration = Scalar(0);
  int bandlimit = 0;
};

// Smallest band limit that resolves a unimodal model of the given
// concentration (half-band kernel tail at or below kTailTolerance).
inline constexpr double kTailTolerance = 1e-4;

inline int unimodal_min_bandlimit(double concentration) {
  if (concentration <= 0.0) return 0;
  const double target = concentration * std::log(1.0 / kTailTolerance);
  // smallest integer half-band with k(k+1) >= target
  const int k = int(std::ceil((-1.0 + std::sqrt(1.0 + 4.0 * target)) / 2.0));
  return 2 * std::max(k, 1);
}

namespace detail {

// Character expansion of the zonal kernel sum_k a_k chi_k at rotation angle
// omega, with chi_k(omega) = U_{2k}(cos(omega/2)) evaluated by the Chebyshev
// recurrence (no trigonometric division, stable at omega = 0).
template <typename Scalar>
Scalar zonal_kernel(const std::vector<Scalar>& a, Scalar cos_half_angle) {
  const Scalar x = cos_half_angle;
  const int kmax = int(a.size()) - 1;
  Scalar u_prev = Scalar(0);  // U_{-1}
  Scalar u_cur = Scalar(1);   // U_0
  Scalar acc = a[0] * u_cur;
  for (int j = 1; j <= 2 * kmax; ++j) {
    const Scalar u_next = Scalar(2) * x * u_cur - u_prev;
    u_prev = u_cur;
    u_cur = u_next;
    if ((j & 1) == 0) acc += a[std::size_t(j / 2)] * u_cur;
  }
  return acc;
}

}  // namespace detail

// Coefficients of the model density.  Exact for the band limit requested;
// throws ModelError when the band limit cannot resolve the concentration.
template <typename Scalar>
SO3Coeffs<Scalar> make_odf(const OdfModel<Scalar>& model) {
  limits::check_bandlimit(model.bandlimit);
  if (!(model.concentration >= Scalar(0)) || !std::isfinite(model.concentration))
    throw ModelError("concentration must be finite and nonnegative");

  SO3Coeffs<Scalar> c(model.bandlimit);
  if (model.kind == OdfKind::Uniform || model.concentration == Scalar(0)) {
    c(0, 0, 0) = std::complex<Scalar>(1);
    return c;
  }

  const int L = model.bandlimit;
  const int half = L / 2;
  const int needed = unimodal_min_bandlimit(double(model.concentration));
  if (L < std::max(needed, 2))
    throw ModelError("band limit " + std::to_string(L) +
                     " cannot resolve concentration " +
                     std::to_string(double(model.concentration)) +
                     "; need at least " + std::to_string(std::max(needed, 2)));

  std::vector<Scalar> a(std::size_t(half) + 1);
  for (int k = 0; k <= half; ++k)
    a[std::size_t(k)] = std::exp(-Scalar(k * (k + 1)) / model.concentration);

  // Square of the half-band zonal kernel, centered at the identity.
  const auto f_centered = [&](const Rotation<Scalar>& g) {
    const Scalar ch = std::min(Scalar(1), std::abs(g.quat().w()));
    const Scalar u = detail::zonal_kernel(a, ch);
    return std::complex<Scalar>(u * u);
  };
  SO3Coeffs<Scalar> raw = so3_analyze<Scalar>(f_centered, L);

  const Scalar mean = raw(0, 0, 0).real();
  if (!(mean > Scalar(0)))
    throw ModelError("degenerate unimodal kernel (nonpositive mean)");
  for (int l = 0; l <= L; ++l) raw.block(l) /= mean;

  // Shift the peak from the identity to the model center: coefficients of
  // g -> f(g0^{-1} g) are D^l(g0) times the centered blocks.
  const std::vector<MatrixXc<Scalar>> D = wigner_D_stack<Scalar>(L, model.center);
  for (int l = 0; l <= L; ++l) raw.block(l) = D[std::size_t(l)] * raw.block(l);
  return raw;
}

// Minimum of the synthesized density over a moderate rotation grid; a cheap
// certificate that a model is nonnegative in practice.
template <typename Scalar>
Scalar odf_grid_min(const SO3Coeffs<Scalar>& c, int probe_bandlimit = 20) {
  const QuadratureRule<Scalar> rule = so3_quadrature<Scalar>(probe_bandlimit);
  const std::vector<Rotation<Scalar>> nodes = rule.so3_nodes();
  std::vector<Scalar> vals(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) {
    vals[i] = so3_synthesize(c, nodes[i]).real();
  });
  return *std::min_element(vals.begin(), vals.end());
}

// ---------------------------------------------------------------------------
// Forward pole figures

namespace detail {

// Per-degree row vectors z_l(n) = sum_m Y_l^m(h) B_l(m, n) so that
// F(h, r) = (4 pi)^2 sum_l z_l . conj(y_l(r)); precomputing them makes a
// whole figure at fixed h cost O(L^2) per grid point.
template <typename Scalar>
std::vector<VectorXc<Scalar>> figure_kernel(const PairCoeffs<Scalar>& B,
                                            const UnitVector<Scalar>& h) {
  const int L = B.bandlimit();
  const SphHarmTable<Scalar> yh = SphHarmTable<Scalar>::evaluate(L, h);
  std::vector<VectorXc<Scalar>> z(std::size_t(L) + 1);
  for (int l = 0; l <= L; ++l) {
    VectorXc<Scalar> row = VectorXc<Scalar>::Zero(2 * l + 1);
    for (int n = -l; n <= l; ++n) {
      std::complex<Scalar> acc(0);
      for (int m = -l; m <= l; ++m) acc += yh(l, m) * B.block(l)(m + l, n + l);
      row(n + l) = acc;
    }
    z[std::size_t(l)] = row;
  }
  return z;
}

template <typename Scalar>
Scalar evaluate_kernel(const std::vector<VectorXc<Scalar>>& z,
                       const SphHarmTable<Scalar>& yr) {
  const int L = int(z.size()) - 1;
  std::complex<Scalar> acc(0);
  for (int l = 0; l <= L; ++l)
    for (int n = -l; n <= l; ++n)
      acc += z[std::size_t(l)](n + l) * std::conj(yr(l, n));
  const Scalar four_pi = Scalar(4) * pi_v<Scalar>;
  return (four_pi * four_pi * acc).real();
}

}  // namespace detail

// Pole figure of the density with coefficients c at crystal direction h,
// evaluated on the given grid (its values are overwritten).  By default the
// antipodally symmetrized transform is produced; raw = true evaluates the
// one-sided circle transform instead.
template <typename Scalar>
PoleFigureGrid<Scalar> pole_figure(const SO3Coeffs<Scalar>& c,
                                   const UnitVector<Scalar>& h,
                                   PoleFigureGrid<Scalar> grid,
                                   bool raw = false) {
  grid.h = h;
  grid.check_consistent();
  grid.bandlimit = c.bandlimit();
  const PairCoeffs<Scalar> B = radon_harmonic(c);
  const auto zp = detail::figure_kernel(B, h);
  const auto zm = detail::figure_kernel(B, -h);
  grid.values.resize(Eigen::Index(grid.size()));
  parallel_for(grid.size(), [&](std::size_t j) {
    const SphHarmTable<Scalar> yr = SphHarmTable<Scalar>::evaluate(c.bandlimit(), grid.direction(j));
    const Scalar vp = detail::evaluate_kernel(zp, yr);
    if (raw) {
      grid.values[Eigen::Index(j)] = vp;
    } else {
      const Scalar vm = detail::evaluate_kernel(zm, yr);
      grid.values[Eigen::Index(j)] = (vp + vm) / Scalar(2);
    }
  });
  return grid;
}

// Convenience overload on the default grid for the coefficient band limit.
template <typename Scalar>
PoleFigureGrid<Scalar> pole_figure(const SO3Coeffs<Scalar>& c,
                                   const UnitVector<Scalar>& h,
                                   bool raw = false) {
  return pole_figure(c, h, make_polar_grid(h, c.bandlimit()), raw);
}

// Projection onto even degrees (the part determined by pole figures).
template <typename Scalar>
SO3Coeffs<Scalar> even_projector(const SO3Coeffs<Scalar>& c) {
  SO3Coeffs<Scalar> out = c;
  for (int l = 1; l <= out.bandlimit(); l += 2) out.block(l).setZero();
  return out;
}

// ---------------------------------------------------------------------------
// Reconstruction of the even part

// DirectLS solves the assembled linear system in one least-squares pass
// (minimum-norm solution on the undetermined subspace).  NormalEquations
// forms the Gram matrix and inverts its spectrum, the classical
// backprojection-style route; both agree on the identifiable subspace.
enum class ReconstructMethod { DirectLS, NormalEquations };

template <typename Scalar = double>
struct ReconstructOptions {
  ReconstructMethod method = ReconstructMethod::DirectLS;
  Scalar rank_rel_threshold = Scalar(1e-10);
  bool check_grids = true;  // refuse figures whose grid cannot resolve band L
};

template <typename Scalar = double>
struct ReconstructReport {
  int bandlimit = 0;
  int unknowns = 0;   // even coefficients through the band limit
  int rank = 0;       // dimension the data actually determines
  Scalar condition = Scalar(0);  // on the identifiable subspace
  std::vector<Scalar> figure_rms;         // per-figure residual RMS
  std::vector<int> degrees;               // even degrees
  std::vector<int> degree_size;           // (2l+1)^2 coefficients at degree l
  std::vector<int> degree_identifiable;   // determined by the h directions

  bool fully_determined() const { return rank == unknowns; }

  std::string summary() const {
    std::string s = "band " + std::to_string(bandlimit) + ": rank " +
                    std::to_string(rank) + " of " + std::to_string(unknowns) +
                    " even coefficients determined";
    for (std::size_t i = 0; i < degrees.size(); ++i)
      if (degree_identifiable[i] < degree_size[i])
        s += "\n  degree " + std::to_string(degrees[i]) + ": " +
             std::to_string(degree_identifiable[i]) + " of " +
             std::to_string(degree_size[i]) + " determined";
    return s;
  }
};

template <typename Scalar = double>
struct ReconstructResult {
  SO3Coeffs<Scalar> coeffs;
  ReconstructReport<Scalar> report;
};

namespace detail {

// Index bookkeeping for the stacked even-degree coefficient vector.
inline std::vector<int> even_degrees(int L) {
  std::vector<int> d;
  for (int l = 0; l <= L; l += 2) d.push_back(l);
  return d;
}

inline int even_coefficient_count(int L) {
  int u = 0;
  for (int l = 0; l <= L; l += 2) u += (2 * l + 1) * (2 * l + 1);
  return u;
}

inline int even_rmode_count(int L) {
  int k = 0;
  for (int l = 0; l <= L; l += 2) k += 2 * l + 1;
  return k;
}

}  // namespace detail

// Recover the even-degree coefficients of a density from pole figures.
//
// The data value at (h_i, r_ij) is linear in the even coefficients:
//   P(h, r) = 4 pi * sum_{even l} sum_{m,n} c_l(m,n) Y_l^m(h) conj(Y_l^n(r)).
// The system is solved by the selected method; rank deficiency (too few
// distinct h directions for the band) is reported, not treated as an error.
// DataError is thrown when an individual figure's r-grid cannot determine
// even band-L data by itself, since such a figure under-constrains every
// degree it claims to measure.
template <typename Scalar>
ReconstructResult<Scalar> reconstruct_even(
    const std::vector<PoleFigureGrid<Scalar>>& figures, int L,
    const ReconstructOptions<Scalar>& opts = {}) {
  using Complex = std::complex<Scalar>;
  limits::check_bandlimit(L);
  if (figures.empty()) throw DataError("no pole figures supplied");

  std::size_t total_rows = 0;
  for (std::size_t i = 0; i < figures.size(); ++i) {
    const auto& fig = figures[i];
    fig.check_consistent();
    if (fig.size() == 0)
      throw DataError("pole figure " + std::to_string(i) + " is empty");
    if (!fig.values.allFinite())
      throw DataError("pole figure " + std::to_string(i) + " contains non-finite values");
    total_rows += fig.size();
  }

  const std::vector<int> degrees = detail::even_degrees(L);
  const int unknowns = detail::even_coefficient_count(L);
  const int rmodes = detail::even_rmode_count(L);

  // Per-figure grid adequacy: the specimen grid must determine the figure's
  // own even band-L content.
  if (opts.check_grids) {
    for (std::size_t i = 0; i < figures.size(); ++i) {
      const auto& fig = figures[i];
      MatrixXc<Scalar> phi(static_cast<Eigen::Index>(fig.size()), rmodes);
      parallel_for(fig.size(), [&](std::size_t j) {
        const SphHarmTable<Scalar> yr = SphHarmTable<Scalar>::evaluate(L, fig.direction(j));
        int col = 0;
        for (int l : degrees)
          for (int n = -l; n <= l; ++n)
            phi(Eigen::Index(j), col++) = std::conj(yr(l, n));
      });
      Eigen::CompleteOrthogonalDecomposition<MatrixXc<Scalar>> cod(phi.rows(), phi.cols());
      cod.setThreshold(opts.rank_rel_threshold);
      cod.compute(phi);
      if (cod.rank() < rmodes)
        throw DataError("pole figure " + std::to_string(i) + ": grid with " +
                        std::to_string(fig.size()) + " points determines only " +
                        std::to_string(int(cod.rank())) + " of " + std::to_string(rmodes) +
                        " even modes at band " + std::to_string(L) +
                        "; refine the grid or lower the band limit");
    }
  }

  // Assemble the design matrix and data vector.
  MatrixXc<Scalar> M(static_cast<Eigen::Index>(total_rows), unknowns);
  VectorXc<Scalar> v(static_cast<Eigen::Index>(total_rows));
  std::vector<std::size_t> row_offset(figures.size());
  {
    std::size_t off = 0;
    for (std::size_t i = 0; i < figures.size(); ++i) {
      row_offset[i] = off;
      off += figures[i].size();
    }
  }
  const Scalar four_pi = Scalar(4) * pi_v<Scalar>;
  for (std::size_t i = 0; i < figures.size(); ++i) {
    const auto& fig = figures[i];
    const SphHarmTable<Scalar> yh = SphHarmTable<Scalar>::evaluate(L, fig.h);
    parallel_for(fig.size(), [&](std::size_t j) {
      const Eigen::Index row = Eigen::Index(row_offset[i] + j);
      const SphHarmTable<Scalar> yr = SphHarmTable<Scalar>::evaluate(L, fig.direction(j));
      int col = 0;
      for (int l : degrees)
        for (int m = -l; m <= l; ++m)
          for (int n = -l; n <= l; ++n)
            M(row, col++) = four_pi * yh(l, m) * std::conj(yr(l, n));
      v(row) = Complex(fig.values[Eigen::Index(j)]);
    });
  }

  // Solve.
  VectorXc<Scalar> x;
  int rank = 0;
  Scalar condition = Scalar(0);
  if (opts.method == ReconstructMethod::DirectLS) {
    Eigen::CompleteOrthogonalDecomposition<MatrixXc<Scalar>> cod(M.rows(), M.cols());
    cod.setThreshold(opts.rank_rel_threshold);
    cod.compute(M);
    rank = int(cod.rank());
    x = cod.solve(v);
    if (rank > 0) {
      const auto diag = cod.matrixT().diagonal().head(rank).cwiseAbs().eval();
      condition = diag.maxCoeff() / diag.minCoeff();
    }
  } else {
    const MatrixXc<Scalar> G = M.adjoint() * M;
    const VectorXc<Scalar> b = M.adjoint() * v;
    Eigen::SelfAdjointEigenSolver<MatrixXc<Scalar>> es(G);
    if (es.info() != Eigen::Success)
      throw NumericError("eigendecomposition of the Gram matrix failed");
    const VectorX<Scalar> lam = es.eigenvalues();
    const Scalar lam_max = lam.maxCoeff();
    const Scalar cutoff =
        lam_max * opts.rank_rel_threshold * opts.rank_rel_threshold;
    x = VectorXc<Scalar>::Zero(unknowns);
    Scalar lam_min_kept = lam_max;
    for (int k = 0; k < lam.size(); ++k) {
      if (!(lam[k] > cutoff) || !(lam[k] > Scalar(0))) continue;
      ++rank;
      lam_min_kept = std::min(lam_min_kept, lam[k]);
      const VectorXc<Scalar> u = es.eigenvectors().col(k);
      x += u * (u.dot(b) / Complex(lam[k]));
    }
    if (rank > 0) condition = std::sqrt(lam_max / lam_min_kept);
  }

  // Unpack into even blocks; the kernel and the data share the symmetry of
  // real densities, so symmetrizing only removes rounding skew.
  ReconstructResult<Scalar> result{SO3Coeffs<Scalar>(L), {}};
  {
    int col = 0;
    for (int l : degrees)
      for (int m = -l; m <= l; ++m)
        for (int n = -l; n <= l; ++n) result.coeffs(l, m, n) = x(col++);
  }
  symmetrize_real(result.coeffs);

  ReconstructReport<Scalar>& rep = result.report;
  rep.bandlimit = L;
  rep.unknowns = unknowns;
  rep.rank = rank;
  rep.condition = condition;
  rep.degrees = degrees;

  for (int l : degrees) {
    rep.degree_size.push_back((2 * l + 1) * (2 * l + 1));
    MatrixXc<Scalar> H(static_cast<Eigen::Index>(figures.size()), 2 * l + 1);
    for (std::size_t i = 0; i < figures.size(); ++i) {
      const SphHarmTable<Scalar> yh = SphHarmTable<Scalar>::evaluate(l, figures[i].h);
      for (int m = -l; m <= l; ++m) H(Eigen::Index(i), m + l) = yh(l, m);
    }
    Eigen::CompleteOrthogonalDecomposition<MatrixXc<Scalar>> cod(H.rows(), H.cols());
    cod.setThreshold(opts.rank_rel_threshold);
    cod.compute(H);
    rep.degree_identifiable.push_back(int(cod.rank()) * (2 * l + 1));
  }

  rep.figure_rms.resize(figures.size());
  const VectorXc<Scalar> resid = M * x - v;
  for (std::size_t i = 0; i < figures.size(); ++i) {
    const Scalar norm2 =
        resid.segment(Eigen::Index(row_offset[i]), Eigen::Index(figures[i].size()))
            .squaredNorm();
    rep.figure_rms[i] = std::sqrt(norm2 / Scalar(figures[i].size()));
  }
  return result;
}

}  // namespace texradon
