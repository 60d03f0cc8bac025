// Wigner d and D functions.
//
// Conventions: d^l_{mn}(beta) = <l m| exp(-i beta J_y) |l n> (the standard
// real-valued little-d), and
//
//   D^l_{mn}(alpha, beta, gamma) = exp(-i m alpha) d^l_{mn}(beta) exp(-i n gamma)
//
// with Z-Y-Z Euler angles, so that D^l is a unitary representation:
// D^l(g1 g2) = D^l(g1) D^l(g2) and D^l(g^{-1}) = D^l(g)^dagger.
// Handy identities in this convention, both covered by tests:
//   d^l_{mn} = (-1)^{m-n} d^l_{nm} = d^l_{-n,-m},
//   conj(D^l_{mn}(g)) = (-1)^{m-n} D^l_{-m,-n}(g).
//
// Values are computed by a three-term recurrence in l at fixed (m, n),
// seeded at l = max(|m|, |n|) with closed forms whose binomial factors are
// accumulated as running products (no factorials, stable beyond l = 64).
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "texradon/limits.hpp"
#include "texradon/rotations.hpp"

namespace texradon {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using MatrixXc = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using VectorXc = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

namespace detail {

template <typename Scalar>
Scalar pow_signed(Scalar base, int k, bool negate) {
  Scalar p = std::pow(std::abs(base), Scalar(k));
  const bool base_neg = base < Scalar(0);
  if ((negate || base_neg) && (k & 1)) p = -p;
  return p;
}

// sqrt of the binomial coefficient C(2*l0, k), as a running product.
template <typename Scalar>
Scalar sqrt_binomial(int l0, int k) {
  Scalar c = Scalar(1);
  for (int j = 1; j <= k; ++j) c *= Scalar(2 * l0 - k + j) / Scalar(j);
  return std::sqrt(c);
}

// Seed value d^{l0}_{mn}(beta) at l0 = max(|m|, |n|), from the closed forms
// at the edge of the index triangle.  c2, s2 are cos and sin of beta/2.
template <typename Scalar>
Scalar wigner_d_seed(int m, int n, Scalar c2, Scalar s2) {
  const int l0 = std::max(std::abs(m), std::abs(n));
  if (l0 == 0) return Scalar(1);
  if (n == l0)  // d^l_{m,l}  =  sqrt(C) c^{l+m} s^{l-m}
    return sqrt_binomial<Scalar>(l0, l0 - m) * pow_signed(c2, l0 + m, false) *
           pow_signed(s2, l0 - m, false);
  if (n == -l0)  // d^l_{m,-l} =  sqrt(C) c^{l-m} (-s)^{l+m}
    return sqrt_binomial<Scalar>(l0, l0 - m) * pow_signed(c2, l0 - m, false) *
           pow_signed(s2, l0 + m, true);
  if (m == l0)  // d^l_{l,n}  =  sqrt(C) c^{l+n} (-s)^{l-n}
    return sqrt_binomial<Scalar>(l0, l0 - n) * pow_signed(c2, l0 + n, false) *
           pow_signed(s2, l0 - n, true);
  // m == -l0     d^l_{-l,n} =  sqrt(C) c^{l-n} s^{l+n}
  return sqrt_binomial<Scalar>(l0, l0 - n) * pow_signed(c2, l0 - n, false) *
         pow_signed(s2, l0 + n, false);
}

inline void check_wigner_indices(int l, int m, int n) {
  if (l < 0 || l > limits::max_bandlimit())
    throw BandLimitError("Wigner degree l = " + std::to_string(l) +
                         " outside [0, " + std::to_string(limits::max_bandlimit()) +
                         "]");
  if (std::abs(m) > l || std::abs(n) > l)
    throw IndexError("Wigner indices (m, n) = (" + std::to_string(m) + ", " +
                     std::to_string(n) + ") outside degree l = " +
                     std::to_string(l));
}

}  // namespace detail

// Fills out[l] with d^l_{mn}(beta) for l in [max(|m|,|n|), L]; entries below
// the seed degree are left untouched.  out must hold at least L+1 entries.
template <typename Scalar>
void wigner_d_sequence(int L, int m, int n, Scalar beta, Scalar* out) {
  const int l0 = std::max(std::abs(m), std::abs(n));
  const Scalar c2 = std::cos(beta / Scalar(2));
  const Scalar s2 = std::sin(beta / Scalar(2));
  const Scalar x = std::cos(beta);
  Scalar dm1 = Scalar(0);  // d^{l-2}, initially d^{l0 - 1} := 0
  Scalar d0 = detail::wigner_d_seed(m, n, c2, s2);
  out[l0] = d0;
  const Scalar mn = Scalar(m) * Scalar(n);
  Scalar a_prev = Scalar(0);  // a_{l0} vanishes: l0 = |m| or |n|
  for (int l = l0 + 1; l <= L; ++l) {
    const Scalar ll = Scalar(l);
    const Scalar a_l = std::sqrt((ll * ll - Scalar(m) * Scalar(m)) *
                                 (ll * ll - Scalar(n) * Scalar(n))) / ll;
    const Scalar drift = (mn == Scalar(0)) ? Scalar(0) : mn / (ll * (ll - Scalar(1)));
    const Scalar d1 = (Scalar(2 * l - 1) * (x - drift) * d0 - a_prev * dm1) / a_l;
    out[l] = d1;
    dm1 = d0;
    d0 = d1;
    a_prev = a_l;
  }
}

// Single value d^l_{mn}(beta).
template <typename Scalar>
Scalar wigner_d(int l, int m, int n, Scalar beta) {
  detail::check_wigner_indices(l, m, n);
  std::vector<Scalar> seq(std::size_t(l) + 1, Scalar(0));
  wigner_d_sequence(l, m, n, beta, seq.data());
  return seq[std::size_t(l)];
}

// All little-d matrices d^l(beta) for l = 0..L; block l is (2l+1) x (2l+1)
// with row index m + l and column index n + l.
template <typename Scalar>
std::vector<MatrixX<Scalar>> wigner_d_stack(int L, Scalar beta) {
  limits::check_bandlimit(L);
  std::vector<MatrixX<Scalar>> stack;
  stack.reserve(std::size_t(L) + 1);
  for (int l = 0; l <= L; ++l) stack.emplace_back(MatrixX<Scalar>::Zero(2 * l + 1, 2 * l + 1));
  std::vector<Scalar> seq(std::size_t(L) + 1);
  for (int m = -L; m <= L; ++m) {
    for (int n = -L; n <= L; ++n) {
      const int l0 = std::max(std::abs(m), std::abs(n));
      if (l0 > L) continue;
      wigner_d_sequence(L, m, n, beta, seq.data());
      for (int l = l0; l <= L; ++l) stack[std::size_t(l)](m + l, n + l) = seq[std::size_t(l)];
    }
  }
  return stack;
}

// D^l_{mn}(g) for a single index triple.
template <typename Scalar>
std::complex<Scalar> wigner_D(int l, int m, int n, const Rotation<Scalar>& g) {
  detail::check_wigner_indices(l, m, n);
  const EulerZYZ<Scalar> e = rotation_to_euler(g);
  const Scalar d = wigner_d(l, m, n, e.beta);
  return std::polar(Scalar(1), -Scalar(m) * e.alpha) * d *
         std::polar(Scalar(1), -Scalar(n) * e.gamma);
}

// All D^l(g) matrices for l = 0..L (same block layout as wigner_d_stack).
template <typename Scalar>
std::vector<MatrixXc<Scalar>> wigner_D_stack(int L, const Rotation<Scalar>& g) {
  limits::check_bandlimit(L);
  const EulerZYZ<Scalar> e = rotation_to_euler(g);
  const auto d = wigner_d_stack(L, e.beta);
  // Azimuthal phases exp(-i m alpha), exp(-i n gamma) for m, n in [-L, L].
  VectorXc<Scalar> pa(2 * L + 1), pg(2 * L + 1);
  for (int m = -L; m <= L; ++m) {
    pa(m + L) = std::polar(Scalar(1), -Scalar(m) * e.alpha);
    pg(m + L) = std::polar(Scalar(1), -Scalar(m) * e.gamma);
  }
  std::vector<MatrixXc<Scalar>> stack;
  stack.reserve(std::size_t(L) + 1);
  for (int l = 0; l <= L; ++l) {
    MatrixXc<Scalar> D(2 * l + 1, 2 * l + 1);
    for (int i = 0; i < 2 * l + 1; ++i)
      for (int j = 0; j < 2 * l + 1; ++j)
        D(i, j) = pa(i - l + L) * d[std::size_t(l)](i, j) * pg(j - l + L);
    stack.push_back(std::move(D));
  }
  return stack;
}

}  // namespace texradon
