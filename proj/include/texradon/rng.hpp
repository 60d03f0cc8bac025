// Deterministic random sources.
//
// std::mt19937_64 is fully specified by the standard; the mappings to
// doubles below are explicit (no library distributions), so a fixed seed
// produces the same stream on every platform and standard library.
#pragma once

#include <cstdint>
#include <random>

#include "texradon/harmonics.hpp"
#include "texradon/rotations.hpp"

namespace texradon {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform on the sphere (area measure).
  UnitVector<double> unit_vector() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * pi_v<double>);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return UnitVector<double>(s * std::cos(phi), s * std::sin(phi), z);
  }

  // Haar-uniform rotation (Shoemake's subgroup algorithm).
  Rotation<double> rotation() {
    const double u1 = uniform();
    const double u2 = uniform(0.0, 2.0 * pi_v<double>);
    const double u3 = uniform(0.0, 2.0 * pi_v<double>);
    const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    return Rotation<double>(b * std::cos(u3), a * std::sin(u2), a * std::cos(u2),
                            b * std::sin(u3));
  }

  // Random coefficient table with entries uniform in the complex unit box.
  // real_valued projects onto the symmetry of real functions; unit_mean then
  // pins the mean value to 1 (probability-density style tables).
  SO3Coeffs<double> so3_coeffs(int L, bool real_valued = true,
                               bool unit_mean = false) {
    SO3Coeffs<double> c(L);
    for (int l = 0; l <= L; ++l)
      for (int m = -l; m <= l; ++m)
        for (int n = -l; n <= l; ++n)
          c(l, m, n) = {uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
    if (real_valued) symmetrize_real(c);
    if (unit_mean) c(0, 0, 0) = 1.0;
    return c;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace texradon
