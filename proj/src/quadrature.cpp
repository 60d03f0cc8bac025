// Shared cache of double-precision Gauss-Legendre rules.

#include "texradon/quadrature.hpp"

#include <map>
#include <mutex>

namespace texradon {
namespace detail {

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre_cached(
    int n) {
  static std::mutex mutex;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre<double>(n)).first;
  return it->second;
}

}  // namespace detail
}  // namespace texradon
