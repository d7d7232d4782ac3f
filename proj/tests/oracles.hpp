#pragma once

// Brute-force reference implementations used to check the library. They
// share no code with it beyond the plain symbol types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "nonhalt/core.hpp"

namespace oracle {

using nonhalt::SymbolId;
using Stream = std::vector<SymbolId>;

// 1-based indexing as in the anomaly definition.
inline SymbolId x(const Stream& s, std::size_t i) { return s[i - 1]; }

// x_i = x_{j} with j = ((i - b - 1) mod c) + 1 + b for every i in (b, ell].
inline bool cyclic(const Stream& s, std::size_t b, std::size_t c, std::size_t ell) {
  if (c == 0 || ell > s.size() || ell <= b + c) return false;
  for (std::size_t i = b + 1; i <= ell; ++i) {
    const std::size_t j = ((i - b - 1) % c) + 1 + b;
    if (x(s, i) != x(s, j)) return false;
  }
  return true;
}

inline bool is_periodic(const Stream& s, std::size_t p) {
  for (std::size_t i = p; i < s.size(); ++i) {
    if (s[i] != s[i - p]) return false;
  }
  return true;
}

inline std::size_t primitive_period(const Stream& s) {
  for (std::size_t p = 1; p <= s.size(); ++p) {
    if (is_periodic(s, p)) return p;
  }
  return s.size();
}

struct Found {
  std::size_t b, c, ell, r_obs;
  Stream cycle;
};

// Tries every (c, b) pair in order; O(ell^2 * c_max) condition checks.
inline std::optional<Found> detect(const Stream& s, std::size_t c_max, std::size_t r_min) {
  const std::size_t ell = s.size();
  for (std::size_t c = 1; c <= c_max; ++c) {
    for (std::size_t b = 0; b + c < ell; ++b) {
      if (!cyclic(s, b, c, ell)) continue;
      const std::size_t r = (ell - b) / c;
      if (r < r_min) continue;
      Stream cycle(s.begin() + static_cast<std::ptrdiff_t>(b), s.begin() + static_cast<std::ptrdiff_t>(b + c));
      return Found{b, c, ell, r, cycle};
    }
  }
  return std::nullopt;
}

inline Stream rotate(const Stream& s, std::size_t k) {
  Stream out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[(i + k) % s.size()];
  return out;
}

inline Stream least_rotation(const Stream& s) {
  Stream best = s;
  for (std::size_t k = 1; k < s.size(); ++k) best = std::min(best, rotate(s, k));
  return best;
}

// Slice of length w starting at offset i of the cycle repeated enough times.
inline Stream periodic_slice(const Stream& cycle, std::size_t w, std::size_t i) {
  const std::size_t c = cycle.size();
  const std::size_t copies = (w + i + c - 1) / c;
  Stream rep;
  for (std::size_t k = 0; k < copies; ++k) rep.insert(rep.end(), cycle.begin(), cycle.end());
  return Stream(rep.begin() + static_cast<std::ptrdiff_t>(i), rep.begin() + static_cast<std::ptrdiff_t>(i + w));
}

inline std::vector<long double> softmax(const std::vector<double>& z, long double tau) {
  std::vector<long double> p(z.size());
  long double total = 0;
  for (std::size_t i = 0; i < z.size(); ++i) total += p[i] = std::exp(static_cast<long double>(z[i]) / tau);
  for (auto& v : p) v /= total;
  return p;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace oracle
