// Global band-limit configuration.
//
// Harmonic operations accept degrees up to max_bandlimit() (default 64,
// raisable to 128).  Quadrature rules go up to twice that, because analysis
// at band L integrates products of two band-L factors exactly.
#pragma once

#include <atomic>

#include "texradon/error.hpp"

namespace texradon {
namespace limits {

inline constexpr int kDefaultMaxBandlimit = 64;
inline constexpr int kAbsoluteMaxBandlimit = 128;

inline std::atomic<int>& max_bandlimit_storage() {
  static std::atomic<int> value{kDefaultMaxBandlimit};
  return value;
}

inline int max_bandlimit() { return max_bandlimit_storage().load(); }

// Quadrature rules may be requested up to 2 * max_bandlimit().
inline int max_quadrature_bandlimit() { return 2 * max_bandlimit(); }

inline void set_max_bandlimit(int L) {
  if (L < 0 || L > kAbsoluteMaxBandlimit)
    throw BandLimitError("max band limit must lie in [0, 128], got " +
                         std::to_string(L));
  max_bandlimit_storage().store(L);
}

inline void check_bandlimit(int L) {
  if (L < 0)
    throw BandLimitError("band limit must be nonnegative, got " +
                         std::to_string(L));
  if (L > max_bandlimit())
    throw BandLimitError("band limit " + std::to_string(L) +
                         " exceeds configured maximum " +
                         std::to_string(max_bandlimit()));
}

inline void check_quadrature_bandlimit(int L) {
  if (L < 0)
    throw BandLimitError("quadrature band limit must be nonnegative, got " +
                         std::to_string(L));
  if (L > max_quadrature_bandlimit())
    throw BandLimitError("quadrature band limit " + std::to_string(L) +
                         " exceeds configured maximum " +
                         std::to_string(max_quadrature_bandlimit()));
}

}  // namespace limits
}  // namespace texradon
