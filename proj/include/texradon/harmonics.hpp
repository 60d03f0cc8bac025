// Harmonic analysis on SO(3) and on S^2 x S^2.
//
// SO(3) Fourier conventions (dg = Haar probability measure):
//
//   analysis    c^l_{mn} = integral f(g) D^l_{mn}(g) dg
//   synthesis   f(g)     = sum_l (2l+1) sum_{mn} c^l_{mn} conj(D^l_{mn}(g))
//
// Since conj(D^l_{mn}(g)) = D^l_{nm}(g^{-1}), the synthesis series is the
// (2l+1)-weighted evaluation at g^{-1}; the conjugate form is used because it
// makes analyze(synthesize(c)) the identity on coefficient tables.
// Parseval: integral |f|^2 dg = sum_l (2l+1) ||C_l||_F^2.
//
// S^2 x S^2 conventions (normalized measures dh/4pi, dr/4pi): functions on
// pairs (h, r) diagonal in degree, with
//
//   analysis    B^l_{mn} = 1/(4pi)^2 integral F(h,r) conj(Y_l^m(h)) Y_l^n(r) dh dr
//   synthesis   F(h,r)   = sum_l (4pi)^2 sum_{mn} B^l_{mn} Y_l^m(h) conj(Y_l^n(r))
//
// The conjugate sits on the h factor in analysis; this pairing is the one
// under which the projection slice identity holds blockwise with a plain
// 4 pi constant (fixed once by calibration against the geometric transform,
// then frozen here).
//
// Analysis at band L uses quadrature exact to degree 2L, so band-limited
// inputs are integrated exactly.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "texradon/parallel.hpp"
#include "texradon/quadrature.hpp"
#include "texradon/wigner.hpp"

namespace texradon {

// ---------------------------------------------------------------------------
// Spherical harmonics (orthonormal, Condon-Shortley phase).
// ---------------------------------------------------------------------------

namespace detail {

// Normalized associated Legendre values p[l][m] for 0 <= m <= l <= L such
// that Y_l^m = p(l,m) exp(i m phi).  ct = cos(theta), st = sin(theta) >= 0.
template <typename Scalar>
void normalized_legendre(int L, Scalar ct, Scalar st, MatrixX<Scalar>& p) {
  p.setZero(L + 1, L + 1);
  const Scalar inv_sqrt4pi = Scalar(1) / std::sqrt(Scalar(4) * pi_v<Scalar>);
  p(0, 0) = inv_sqrt4pi;
  for (int m = 1; m <= L; ++m)  // diagonal: includes the (-1)^m phase
    p(m, m) = -std::sqrt(Scalar(2 * m + 1) / Scalar(2 * m)) * st * p(m - 1, m - 1);
  for (int m = 0; m < L; ++m) p(m + 1, m) = std::sqrt(Scalar(2 * m + 3)) * ct * p(m, m);
  for (int m = 0; m <= L; ++m) {
    for (int l = m + 2; l <= L; ++l) {
      const Scalar a = std::sqrt(Scalar(4 * l * l - 1) / Scalar(l * l - m * m));
      const Scalar b = std::sqrt(Scalar((l - 1) * (l - 1) - m * m) /
                                 Scalar(4 * (l - 1) * (l - 1) - 1));
      p(l, m) = a * (ct * p(l - 1, m) - b * p(l - 2, m));
    }
  }
}

}  // namespace detail

// All Y_l^m(u) for l <= L, stored per degree; (l, m) entry at row l, m + l.
template <typename Scalar = double>
struct SphHarmTable {
  int L{0};
  std::vector<VectorXc<Scalar>> rows;  // rows[l](m + l)

  static SphHarmTable evaluate(int L, const UnitVector<Scalar>& u) {
    limits::check_bandlimit(L);
    SphHarmTable t;
    t.L = L;
    const Scalar ct = u.z();
    const Scalar st = std::hypot(u.x(), u.y());
    const Scalar phi = u.phi();
    MatrixX<Scalar> p;
    detail::normalized_legendre(L, ct, st, p);
    t.rows.reserve(std::size_t(L) + 1);
    for (int l = 0; l <= L; ++l) {
      VectorXc<Scalar> row(2 * l + 1);
      for (int m = 0; m <= l; ++m) {
        const std::complex<Scalar> ph = std::polar(Scalar(1), Scalar(m) * phi);
        row(l + m) = p(l, m) * ph;
        // Y_l^{-m} = (-1)^m conj(Y_l^m)
        row(l - m) = (m & 1 ? Scalar(-1) : Scalar(1)) * std::conj(row(l + m));
      }
      t.rows.push_back(std::move(row));
    }
    return t;
  }

  const std::complex<Scalar>& operator()(int l, int m) const {
    return rows[std::size_t(l)](m + l);
  }
};

template <typename Scalar>
std::complex<Scalar> sph_harm(int l, int m, const UnitVector<Scalar>& u) {
  detail::check_wigner_indices(l, m, 0);
  return SphHarmTable<Scalar>::evaluate(l, u)(l, m);
}

// ---------------------------------------------------------------------------
// Coefficient tables.
// ---------------------------------------------------------------------------

namespace detail {

template <typename Scalar>
class BlockTable {
 public:
  BlockTable() : L_(0), blocks_(1, MatrixXc<Scalar>::Zero(1, 1)) {}

  explicit BlockTable(int L) : L_(L) {
    limits::check_bandlimit(L);
    blocks_.reserve(std::size_t(L) + 1);
    for (int l = 0; l <= L; ++l)
      blocks_.push_back(MatrixXc<Scalar>::Zero(2 * l + 1, 2 * l + 1));
  }

  int bandlimit() const { return L_; }

  MatrixXc<Scalar>& block(int l) { return blocks_[std::size_t(l)]; }
  const MatrixXc<Scalar>& block(int l) const { return blocks_[std::size_t(l)]; }

  std::complex<Scalar>& operator()(int l, int m, int n) {
    check_wigner_indices(l, m, n);
    if (l > L_) throw IndexError("degree beyond table band limit");
    return blocks_[std::size_t(l)](m + l, n + l);
  }
  const std::complex<Scalar>& operator()(int l, int m, int n) const {
    return const_cast<BlockTable*>(this)->operator()(l, m, n);
  }

  Scalar max_abs() const {
    Scalar v = Scalar(0);
    for (const auto& b : blocks_) v = std::max(v, b.cwiseAbs().maxCoeff());
    return v;
  }

  Scalar max_abs_diff(const BlockTable& o) const {
    Scalar v = Scalar(0);
    const int L = std::max(L_, o.L_);
    for (int l = 0; l <= L; ++l) {
      if (l <= L_ && l <= o.L_)
        v = std::max(v, (blocks_[std::size_t(l)] - o.blocks_[std::size_t(l)])
                            .cwiseAbs()
                            .maxCoeff());
      else if (l <= L_)
        v = std::max(v, blocks_[std::size_t(l)].cwiseAbs().maxCoeff());
      else
        v = std::max(v, o.blocks_[std::size_t(l)].cwiseAbs().maxCoeff());
    }
    return v;
  }

 protected:
  int L_;
  std::vector<MatrixXc<Scalar>> blocks_;
};

}  // namespace detail

// Fourier coefficients of a function on SO(3).
template <typename Scalar = double>
class SO3Coeffs : public detail::BlockTable<Scalar> {
 public:
  using detail::BlockTable<Scalar>::BlockTable;
};

// Degree-diagonal coefficients of a function on S^2 x S^2.
template <typename Scalar = double>
class PairCoeffs : public detail::BlockTable<Scalar> {
 public:
  using detail::BlockTable<Scalar>::BlockTable;
};

// sum_l (2l+1) ||C_l||_F^2; equals integral |f|^2 dg for f = synthesize(c).
template <typename Scalar>
Scalar so3_power(const SO3Coeffs<Scalar>& c) {
  Scalar s = Scalar(0);
  for (int l = 0; l <= c.bandlimit(); ++l)
    s += Scalar(2 * l + 1) * c.block(l).squaredNorm();
  return s;
}

// Largest violation of the real-valuedness symmetry
// c^l_{mn} = (-1)^{m-n} conj(c^l_{-m,-n}).
template <typename Scalar, template <typename> class Table>
Scalar realness_defect(const Table<Scalar>& c) {
  Scalar v = Scalar(0);
  for (int l = 0; l <= c.bandlimit(); ++l)
    for (int m = -l; m <= l; ++m)
      for (int n = -l; n <= l; ++n) {
        const Scalar sign = ((m - n) & 1) ? Scalar(-1) : Scalar(1);
        v = std::max(v, std::abs(c(l, m, n) - sign * std::conj(c(l, -m, -n))));
      }
  return v;
}

// Projects a table onto the real-valuedness symmetry (used by generators).
template <typename Scalar, template <typename> class Table>
void symmetrize_real(Table<Scalar>& c) {
  Table<Scalar> orig = c;
  for (int l = 0; l <= c.bandlimit(); ++l)
    for (int m = -l; m <= l; ++m)
      for (int n = -l; n <= l; ++n) {
        const Scalar sign = ((m - n) & 1) ? Scalar(-1) : Scalar(1);
        c(l, m, n) = (orig(l, m, n) + sign * std::conj(orig(l, -m, -n))) / Scalar(2);
      }
}

// ---------------------------------------------------------------------------
// SO(3) transforms.
// ---------------------------------------------------------------------------

// Fourier analysis of f at band limit L.  Exact for band-limited f (the
// product f * D^l has degree <= 2L and the rule integrates that exactly).
// f may return real or complex values.
template <typename Scalar = double, class F>
SO3Coeffs<Scalar> so3_analyze(F&& f, int L) {
  limits::check_bandlimit(L);
  using C = std::complex<Scalar>;
  const auto rule = so3_quadrature<Scalar>(2 * L);
  const int N = rule.n_azimuth;
  const int M = 2 * L + 1;
  // Azimuthal Fourier matrix E(m + L, a) = exp(-i m alpha_a); alpha and
  // gamma grids coincide.
  MatrixXc<Scalar> E(M, N);
  for (int m = -L; m <= L; ++m)
    for (int a = 0; a < N; ++a)
      E(m + L, a) = std::polar(Scalar(1), -Scalar(m) * rule.azimuth(a));

  SO3Coeffs<Scalar> out(L);
  MatrixXc<Scalar> vals(N, N);
  for (int b = 0; b < rule.n_polar(); ++b) {
    const Scalar beta = std::acos(
        std::max(Scalar(-1), std::min(Scalar(1), rule.polar_cos[std::size_t(b)])));
    // Sample the ring; each (a, c) slot is independent, so this loop
    // parallelizes without changing the result.
    parallel_for(std::size_t(N) * std::size_t(N), [&](std::size_t k) {
      const int a = int(k / std::size_t(N));
      const int c = int(k % std::size_t(N));
      vals(a, c) = C(f(euler_to_rotation(rule.azimuth(a), beta, rule.azimuth(c))));
    });
    // G(m, n) = sum_{a,c} f e^{-im alpha_a} e^{-in gamma_c}
    const MatrixXc<Scalar> G = E * vals * E.transpose();
    const auto d = wigner_d_stack(L, beta);
    const Scalar wb = rule.ring_weight(b);
    for (int l = 0; l <= L; ++l) {
      auto& blk = out.block(l);
      const auto& dl = d[std::size_t(l)];
      for (int i = 0; i < 2 * l + 1; ++i)
        for (int j = 0; j < 2 * l + 1; ++j)
          blk(i, j) += wb * dl(i, j) * G(i - l + L, j - l + L);
    }
  }
  return out;
}

// Evaluates the synthesis series at g.
template <typename Scalar>
std::complex<Scalar> so3_synthesize(const SO3Coeffs<Scalar>& c,
                                    const Rotation<Scalar>& g) {
  using C = std::complex<Scalar>;
  const int L = c.bandlimit();
  const EulerZYZ<Scalar> e = rotation_to_euler(g);
  const auto d = wigner_d_stack(L, e.beta);
  VectorXc<Scalar> ua(2 * L + 1), vg(2 * L + 1);
  for (int m = -L; m <= L; ++m) {
    ua(m + L) = std::polar(Scalar(1), Scalar(m) * e.alpha);
    vg(m + L) = std::polar(Scalar(1), Scalar(m) * e.gamma);
  }
  C sum(0);
  for (int l = 0; l <= L; ++l) {
    const auto& blk = c.block(l);
    const auto& dl = d[std::size_t(l)];
    C acc(0);
    for (int i = 0; i < 2 * l + 1; ++i) {
      C row(0);
      for (int j = 0; j < 2 * l + 1; ++j) row += blk(i, j) * dl(i, j) * vg(j - l + L);
      acc += ua(i - l + L) * row;
    }
    sum += Scalar(2 * l + 1) * acc;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// S^2 x S^2 transforms.
// ---------------------------------------------------------------------------

namespace detail {

// Flat index of (l, n) with |n| <= l: l^2 + n + l.
inline int ln_index(int l, int n) { return l * l + n + l; }

}  // namespace detail

// Analysis of a two-point function F(h, r) at band limit L (degree-diagonal
// part; F built from same-degree pairs of harmonics is captured exactly).
template <typename Scalar = double, class F>
PairCoeffs<Scalar> s2s2_analyze(F&& f, int L) {
  limits::check_bandlimit(L);
  using C = std::complex<Scalar>;
  const auto rule = s2_quadrature<Scalar>(2 * L);
  const auto nodes = rule.s2_nodes();
  const auto w = rule.weights();
  const std::size_t N = nodes.size();
  std::vector<SphHarmTable<Scalar>> ytab(N);
  for (std::size_t i = 0; i < N; ++i)
    ytab[i] = SphHarmTable<Scalar>::evaluate(L, nodes[i]);

  // A[i](l, n) = sum_j w_j F(h_i, r_j) Y_l^n(r_j)
  const int cols = (L + 1) * (L + 1);
  MatrixXc<Scalar> A = MatrixXc<Scalar>::Zero(Eigen::Index(N), cols);
  parallel_for(N, [&](std::size_t i) {
    for (std::size_t j = 0; j < N; ++j) {
      const C fij = C(f(nodes[i], nodes[j]));
      const C wf = w[j] * fij;
      for (int l = 0; l <= L; ++l)
        for (int n = -l; n <= l; ++n)
          A(Eigen::Index(i), detail::ln_index(l, n)) += wf * ytab[j](l, n);
    }
  });

  const Scalar four_pi = Scalar(4) * pi_v<Scalar>;
  const Scalar norm = Scalar(1) / (four_pi * four_pi);
  PairCoeffs<Scalar> out(L);
  for (std::size_t i = 0; i < N; ++i) {
    for (int l = 0; l <= L; ++l) {
      auto& blk = out.block(l);
      for (int m = -l; m <= l; ++m) {
        const C ym = norm * w[i] * std::conj(ytab[i](l, m));
        for (int n = -l; n <= l; ++n)
          blk(m + l, n + l) += ym * A(Eigen::Index(i), detail::ln_index(l, n));
      }
    }
  }
  return out;
}

// Evaluates the pair synthesis series at (h, r).
template <typename Scalar>
std::complex<Scalar> s2s2_synthesize(const PairCoeffs<Scalar>& P,
                                     const UnitVector<Scalar>& h,
                                     const UnitVector<Scalar>& r) {
  const int L = P.bandlimit();
  const auto yh = SphHarmTable<Scalar>::evaluate(L, h);
  const auto yr = SphHarmTable<Scalar>::evaluate(L, r);
  const Scalar four_pi = Scalar(4) * pi_v<Scalar>;
  std::complex<Scalar> sum(0);
  for (int l = 0; l <= L; ++l) {
    std::complex<Scalar> acc(0);
    const auto& blk = P.block(l);
    for (int m = -l; m <= l; ++m) {
      std::complex<Scalar> row(0);
      for (int n = -l; n <= l; ++n) row += blk(m + l, n + l) * std::conj(yr(l, n));
      acc += yh(l, m) * row;
    }
    sum += acc;
  }
  return four_pi * four_pi * sum;
}

}  // namespace texradon
