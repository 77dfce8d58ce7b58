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
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "uavgan/common.hpp"
#include "uavgan/environment.hpp"

namespace uavgan {

/// Discretized coordinate of one channel sample: condition index plus the
/// bin per axis (uav x/y/z, ue x/y/z, t, Re gain, Im gain).
struct BinKey {
    std::int16_t cond = 0;
    std::array<std::int16_t, 9> axis{};

    friend bool operator==(const BinKey& a, const BinKey& b) {
        return a.cond == b.cond && a.axis == b.axis;
    }
};

struct BinKeyHash {
    std::size_t operator()(const BinKey& k) const {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        auto mix = [&h](std::int16_t v) {
            h ^= static_cast<std::uint16_t>(v);
            h *= 0x100000001B3ULL;
        };
        mix(k.cond);
        for (auto v : k.axis) mix(v);
        return static_cast<std::size_t>(h);
    }
};

/// Shared discretization of the sample space. Identical grids are required
/// for any two distributions that are mixed or compared.
struct BinGrid {
    Box3 uav_range;
    Box3 ue_range;
    double t_lo = 0.0, t_hi = 3600.0;
    double gain_lo = -4e-5, gain_hi = 4e-5;
    int spatial_bins = 16;
    int time_bins = 8;
    int gain_bins = 16;

    void validate() const {
        if (!uav_range.valid() || !ue_range.valid())
            throw ConfigError("BinGrid: invalid position ranges");
        if (!(t_hi > t_lo) || !(gain_hi > gain_lo))
            throw ConfigError("BinGrid: invalid scalar ranges");
        if (spatial_bins < 1 || time_bins < 1 || gain_bins < 1)
            throw ConfigError("BinGrid: bin counts must be >= 1");
    }

    bool same_as(const BinGrid& o) const {
        return uav_range.lo == o.uav_range.lo && uav_range.hi == o.uav_range.hi &&
               ue_range.lo == o.ue_range.lo && ue_range.hi == o.ue_range.hi &&
               t_lo == o.t_lo && t_hi == o.t_hi && gain_lo == o.gain_lo &&
               gain_hi == o.gain_hi && spatial_bins == o.spatial_bins &&
               time_bins == o.time_bins && gain_bins == o.gain_bins;
    }

    static std::int16_t bin_of(double v, double lo, double hi, int n) {
        if (n == 1) return 0;
        double f = (v - lo) / (hi - lo);
        int b = static_cast<int>(f * n);
        if (b < 0) b = 0;
        if (b >= n) b = n - 1;  // out-of-range values land in the edge bins
        return static_cast<std::int16_t>(b);
    }

    static double center_of(std::int16_t b, double lo, double hi, int n) {
        return lo + (hi - lo) * (b + 0.5) / n;
    }

    BinKey key_of(const ChannelSample& s) const {
        BinKey k;
        k.cond = static_cast<std::int16_t>(s.condition_idx);
        k.axis[0] = bin_of(s.uav_pos.x, uav_range.lo.x, uav_range.hi.x, spatial_bins);
        k.axis[1] = bin_of(s.uav_pos.y, uav_range.lo.y, uav_range.hi.y, spatial_bins);
        k.axis[2] = bin_of(s.uav_pos.z, uav_range.lo.z, uav_range.hi.z, spatial_bins);
        k.axis[3] = bin_of(s.ue_pos.x, ue_range.lo.x, ue_range.hi.x, spatial_bins);
        k.axis[4] = bin_of(s.ue_pos.y, ue_range.lo.y, ue_range.hi.y, spatial_bins);
        k.axis[5] = bin_of(s.ue_pos.z, ue_range.lo.z, ue_range.hi.z, spatial_bins);
        k.axis[6] = bin_of(s.time, t_lo, t_hi, time_bins);
        k.axis[7] = bin_of(s.gain_est.real(), gain_lo, gain_hi, gain_bins);
        k.axis[8] = bin_of(s.gain_est.imag(), gain_lo, gain_hi, gain_bins);
        return k;
    }

    /// Center |gain|^2 of a bin, for posterior beam scoring.
    double gain_power_center(const BinKey& k) const {
        const double re = center_of(k.axis[7], gain_lo, gain_hi, gain_bins);
        const double im = center_of(k.axis[8], gain_lo, gain_hi, gain_bins);
        return re * re + im * im;
    }

};

/// Sparse non-negative weight table over bins. Distributions are these with
/// total mass 1; batches carry their sample count as mass.
struct SparseDist {
    std::unordered_map<BinKey, double, BinKeyHash> w;

    double mass() const {
        double s = 0.0;
        for (const auto& [k, v] : w) s += v;
        return s;
    }

    double at(const BinKey& k) const {
        auto it = w.find(k);
        return it == w.end() ? 0.0 : it->second;
    }

    void add(const BinKey& k, double v) {
        if (v == 0.0) return;
        w[k] += v;
    }

    void add_scaled(const SparseDist& o, double scale) {
        for (const auto& [k, v] : o.w) add(k, v * scale);
    }

    void scale(double f) {
        for (auto& [k, v] : w) v *= f;
    }

    SparseDist normalized() const {
        SparseDist out = *this;
        const double m = mass();
        if (m <= 0.0) throw ContractViolation("SparseDist: cannot normalize zero mass");
        out.scale(1.0 / m);
        return out;
    }

    std::size_t support_size() const { return w.size(); }

    /// Mass per condition index (1-based), length `conditions`+1.
    std::vector<double> condition_masses(int conditions) const {
        std::vector<double> m(static_cast<std::size_t>(conditions) + 1, 0.0);
        for (const auto& [k, v] : w) {
            if (k.cond >= 1 && k.cond <= conditions)
                m[static_cast<std::size_t>(k.cond)] += v;
        }
        return m;
    }
};

inline SparseDist empirical_distribution(const BinGrid& grid, const Dataset& ds) {
    grid.validate();
    if (ds.samples.empty())
        throw ContractViolation("empirical_distribution: dataset is empty");
    SparseDist d;
    const double unit = 1.0 / ds.samples.size();
    for (const auto& s : ds.samples) d.add(grid.key_of(s), unit);
    return d;
}

/// Symmetrized KL divergence over the union support, in nats. Zero-mass bins
/// on either side get `floor` added before the logs and the totals are
/// renormalized, so disjoint supports stay finite.
inline double symmetric_kl(const SparseDist& p, const SparseDist& q,
                           double floor = 1e-9) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(p.w.size() + q.w.size());
    double p_total = 0.0, q_total = 0.0;
    for (const auto& [k, v] : p.w) {
        double qe = q.at(k);
        if (qe <= 0.0) qe = floor;
        pairs.emplace_back(v, qe);
        p_total += v;
        q_total += qe;
    }
    for (const auto& [k, v] : q.w) {
        if (p.w.count(k)) continue;  // already paired
        pairs.emplace_back(floor, v);
        p_total += floor;
        q_total += v;
    }
    double d = 0.0;
    for (auto& [pe, qe] : pairs) {
        const double a = pe / p_total;
        const double b = qe / q_total;
        d += a * std::log(a / b) + b * std::log(b / a);
    }
    return d;
}

}  // namespace uavgan
