#pragma once

#include "cssp/types.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace cssp {

// All randomized code in the library draws through this wrapper so that a
// given seed reproduces the same stream on every platform. The standard
// distributions are implementation-defined, hence the hand-rolled mappings.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1) with 53 significant bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; values come out in pairs.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t next() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Order-sensitive combiner used to derive per-cell seeds.
inline std::uint64_t mix_seed(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ (splitmix64(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

inline std::uint64_t hash_tag(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
  for (const char ch : s) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Entries are filled row by row so the layout of the stream is fixed.
inline Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      out(i, j) = rng.gaussian();
    }
  }
  return out;
}

} // namespace cssp
