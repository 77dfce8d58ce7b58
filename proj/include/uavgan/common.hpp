// uavgan - cooperative generative channel modeling for UAV mmWave networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace uavgan {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Thrown when an operation is called outside its contract.
struct ContractViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown on malformed or out-of-range configuration input.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    friend Vec3 operator-(const Vec3& a, const Vec3& b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend bool operator==(const Vec3& a, const Vec3& b) {
        return a.x == b.x && a.y == b.y && a.z == b.z;
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

/// Axis-aligned box; degenerate (point) extents are allowed.
struct Box3 {
    Vec3 lo, hi;

    bool valid() const {
        return lo.finite() && hi.finite() && lo.x <= hi.x && lo.y <= hi.y &&
               lo.z <= hi.z;
    }
    bool contains(const Vec3& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y &&
               p.z >= lo.z && p.z <= hi.z;
    }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

// ---------------------------------------------------------------------------
// Deterministic random generation.
//
// std::mt19937_64 plus hand-rolled output maps. The standard distribution
// objects are implementation-defined, which would break the byte-identical
// reproducibility contract across toolchains; these maps are fixed.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Stable 64-bit hash of a label, for deriving per-component substreams.
inline std::uint64_t hash_label(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Derive an independent child seed from (seed, label, index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                                 std::uint64_t index = 0) {
    std::uint64_t s = seed ^ hash_label(label);
    s ^= 0x9E3779B97F4A7C15ULL * (index + 1);
    std::uint64_t st = s;
    return splitmix64(st);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ^ 0xA02C0335D5A2F9EDULL) {
        // warm up so that small seeds diverge immediately
        next_u64();
        next_u64();
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) throw ContractViolation("uniform_index: n must be positive");
        return next_u64() % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double th = 2.0 * kPi * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Complex circularly-symmetric Gaussian with E|z|^2 = variance.
    Complex cnormal(double variance) {
        double s = std::sqrt(variance / 2.0);
        return {normal(0.0, s), normal(0.0, s)};
    }

    Vec3 uniform_in(const Box3& box) {
        return {uniform(box.lo.x, box.hi.x), uniform(box.lo.y, box.hi.y),
                uniform(box.lo.z, box.hi.z)};
    }

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace uavgan
