// Copyright 2026 The Lanetune Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LANETUNE__COMMON_HPP_
#define LANETUNE__COMMON_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lanetune
{

/// Raised when a numerical routine fails to produce a usable result
/// (solver non-convergence, indefinite Hessian, simulation blow-up).
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a)
{
  constexpr double two_pi = 2.0 * M_PI;
  a = std::fmod(a, two_pi);
  if (a <= -M_PI) {
    a += two_pi;
  } else if (a > M_PI) {
    a -= two_pi;
  }
  return a;
}

/// Shift `a` by a multiple of 2*pi so that |result - ref| <= pi.
inline double unwrap_near(double ref, double a)
{
  return ref + wrap_angle(a - ref);
}

/// Deterministic, platform-independent RNG (xoshiro256++ seeded via splitmix64).
/// std::mt19937 with the standard distributions is implementation-defined for
/// normals, which would make generated datasets compiler-dependent.
class Rng
{
public:
  explicit Rng(std::uint64_t seed)
  {
    // splitmix64 expansion of the seed into the xoshiro state
    std::uint64_t x = seed;
    for (auto & si : state_) {
      x += 0x9E3779B97F4A7C15ull;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
      si = z ^ (z >> 31);
    }
  }

  std::uint64_t next_u64()
  {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform() {return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;}

  double uniform(double lo, double hi) {return lo + (hi - lo) * uniform();}

  /// Log-uniform in [lo, hi], lo > 0.
  double log_uniform(double lo, double hi)
  {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  /// Standard normal via Box-Muller (pairs cached).
  double normal()
  {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) {
      u1 = uniform();
    }
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi)
  {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k)
  {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4] = {};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Derive an independent child seed from a master seed and a stream index,
/// so parallel workers get scheduling-independent RNG streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0)
{
  std::uint64_t z = master ^ (0x9E3779B97F4A7C15ull * (stream + 1)) ^ (0xD1B54A32D192ED03ull * (index + 1));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace lanetune

#endif  // LANETUNE__COMMON_HPP_
