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

#include <cstddef>
#include <vector>

#include "uavgan/common.hpp"

namespace uavgan {

/// Thrown when a beamforming coefficient is zero and cannot be inverted.
struct SingularBeamformingError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Uniform-linear-array geometry of the transmit/receive pair.
///
/// `element_phase_unit` is the per-element phase advance per unit sin(angle).
/// The default pi corresponds to half-wavelength element spacing.
struct AntennaConfig {
    int tx_elements = 256;           // M
    int rx_elements = 64;            // N_rx
    double carrier_wavelength = 0.01;  // meters
    double element_phase_unit = kPi;   // radians per unit sin(angle)

    void validate() const {
        if (tx_elements < 1 || rx_elements < 1)
            throw ContractViolation("AntennaConfig: element counts must be >= 1");
        if (!(carrier_wavelength > 0.0))
            throw ContractViolation("AntennaConfig: wavelength must be positive");
    }
};

using CVector = std::vector<Complex>;

/// Minimal dense complex matrix, row-major.
struct CMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Complex> a;

    CMatrix() = default;
    CMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    Complex& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const {
        return a[r * cols + c];
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : a) s += std::norm(v);
        return std::sqrt(s);
    }
};

/// Per-element phase profile of a uniform linear array toward `angle`.
/// Entry m equals exp(j * m * phase_unit * sin(angle)); entry 0 is 1.
inline CVector steering_vector(double angle, int elements,
                               double phase_unit = kPi) {
    if (elements < 1)
        throw ContractViolation("steering_vector: elements must be >= 1");
    CVector v(static_cast<std::size_t>(elements));
    const double step = phase_unit * std::sin(angle);
    for (int m = 0; m < elements; ++m)
        v[static_cast<std::size_t>(m)] = std::polar(1.0, step * m);
    return v;
}

/// One propagation path: complex gain plus departure/arrival angles.
struct PathComponent {
    Complex gain;      // alpha
    double aod = 0.0;  // radians
    double aoa = 0.0;  // radians
};

/// Channel matrix H = sum_l alpha_l * a_r(aoa_l) * a_t(aod_l)^H,
/// sized rx_elements x tx_elements. Rank 1 for a single path.
inline CMatrix mimo_channel(const std::vector<PathComponent>& paths,
                            const AntennaConfig& cfg) {
    cfg.validate();
    if (paths.empty())
        throw ContractViolation("mimo_channel: path list must be non-empty");
    const auto n = static_cast<std::size_t>(cfg.rx_elements);
    const auto m = static_cast<std::size_t>(cfg.tx_elements);
    CMatrix h(n, m);
    for (const auto& p : paths) {
        if (!std::isfinite(std::abs(p.gain)))
            throw ContractViolation("mimo_channel: path gain must be finite");
        CVector ar = steering_vector(p.aoa, cfg.rx_elements, cfg.element_phase_unit);
        CVector at = steering_vector(p.aod, cfg.tx_elements, cfg.element_phase_unit);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < m; ++c)
                h(r, c) += p.gain * ar[r] * std::conj(at[c]);
    }
    return h;
}

/// One beamforming/combining pair of the pilot codebook with its angles.
struct CodebookEntry {
    CVector w;           // transmit beamforming, length M, unit-modulus entries
    CVector q;           // receive combining, length N_rx, unit-modulus entries
    double aod = 0.0;    // radians
    double aoa = 0.0;    // radians
};

/// Ordered set of K beamforming/combining pairs; index k in [1, K] is the
/// learning condition. Angles are grid points in sin-space.
struct Codebook {
    std::vector<CodebookEntry> entries;

    int size() const { return static_cast<int>(entries.size()); }

    const CodebookEntry& at(int k) const {  // 1-based condition index
        if (k < 1 || k > size())
            throw ContractViolation("Codebook: condition index out of range");
        return entries[static_cast<std::size_t>(k - 1)];
    }

    void validate() const {
        if (entries.empty())
            throw ContractViolation("Codebook: must contain at least one entry");
        for (const auto& e : entries) {
            for (const auto& c : e.w)
                if (std::abs(std::abs(c) - 1.0) > 1e-9)
                    throw ContractViolation("Codebook: w entries must be unit-modulus");
            for (const auto& c : e.q)
                if (std::abs(std::abs(c) - 1.0) > 1e-9)
                    throw ContractViolation("Codebook: q entries must be unit-modulus");
        }
    }
};

/// Build an n_t x n_r codebook on a uniform sin-space grid. Each entry is the
/// steering vector pair matched to its grid angles.
inline Codebook make_grid_codebook(const AntennaConfig& cfg, int n_t, int n_r,
                                   double sin_lo = -0.9, double sin_hi = 0.9) {
    cfg.validate();
    if (n_t < 1 || n_r < 1)
        throw ContractViolation("make_grid_codebook: grid sizes must be >= 1");
    auto grid_angle = [&](int i, int n) {
        double s = (n == 1) ? 0.5 * (sin_lo + sin_hi)
                            : sin_lo + (sin_hi - sin_lo) * i / (n - 1);
        return std::asin(s);
    };
    Codebook cb;
    cb.entries.reserve(static_cast<std::size_t>(n_t) * n_r);
    for (int it = 0; it < n_t; ++it) {
        for (int ir = 0; ir < n_r; ++ir) {
            CodebookEntry e;
            e.aod = grid_angle(it, n_t);
            e.aoa = grid_angle(ir, n_r);
            e.w = steering_vector(e.aod, cfg.tx_elements, cfg.element_phase_unit);
            e.q = steering_vector(e.aoa, cfg.rx_elements, cfg.element_phase_unit);
            cb.entries.push_back(std::move(e));
        }
    }
    return cb;
}

namespace detail {
inline Complex dot_conj_left(const CVector& a, const CVector& b) {
    // a^H b
    if (a.size() != b.size())
        throw ContractViolation("vector dimension mismatch");
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}
inline Complex dot_plain(const CVector& a, const CVector& b) {
    // a^T b
    if (a.size() != b.size())
        throw ContractViolation("vector dimension mismatch");
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
}  // namespace detail

/// Received pilot r_k = sqrt(P) * q^H H w + q^H n.
inline Complex received_pilot(const CMatrix& h, const CVector& w, const CVector& q,
                              double pilot_power, const CVector& noise) {
    if (w.size() != h.cols || q.size() != h.rows || noise.size() != h.rows)
        throw ContractViolation("received_pilot: dimension mismatch");
    if (!(pilot_power >= 0.0))
        throw ContractViolation("received_pilot: power must be non-negative");
    Complex hw_q = 0.0;  // q^H H w
    for (std::size_t r = 0; r < h.rows; ++r) {
        Complex row = 0.0;
        for (std::size_t c = 0; c < h.cols; ++c) row += h(r, c) * w[c];
        hw_q += std::conj(q[r]) * row;
    }
    return std::sqrt(pilot_power) * hw_q + detail::dot_conj_left(q, noise);
}

/// Pilot coefficient in factored form: sqrt(P) * (w^T a_t^*) * (q^H a_r).
inline Complex beta_coefficient(const CVector& w, const CVector& q,
                                const CVector& a_t, const CVector& a_r,
                                double pilot_power) {
    CVector at_conj(a_t.size());
    for (std::size_t i = 0; i < a_t.size(); ++i) at_conj[i] = std::conj(a_t[i]);
    return std::sqrt(pilot_power) * detail::dot_plain(w, at_conj) *
           detail::dot_conj_left(q, a_r);
}

/// Kronecker product of two row/column vectors, index (i*b.size()+j).
inline CVector kron(const CVector& a, const CVector& b) {
    CVector out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) out.push_back(x * y);
    return out;
}

/// Column-major vectorization: vec(H)[c*rows + r] = H(r, c).
inline CVector vec(const CMatrix& h) {
    CVector out;
    out.reserve(h.rows * h.cols);
    for (std::size_t c = 0; c < h.cols; ++c)
        for (std::size_t r = 0; r < h.rows; ++r) out.push_back(h(r, c));
    return out;
}

/// Pilot coefficient through the Kronecker route:
/// sqrt(P) * (w^T kron q^H) (a_t^* kron a_r). Kept as the second algebraic
/// route next to beta_coefficient for cross-checking.
inline Complex beta_coefficient_kron(const CVector& w, const CVector& q,
                                     const CVector& a_t, const CVector& a_r,
                                     double pilot_power) {
    if (w.size() != a_t.size() || q.size() != a_r.size())
        throw ContractViolation("beta_coefficient_kron: dimension mismatch");
    CVector q_conj(q.size()), at_conj(a_t.size());
    for (std::size_t i = 0; i < q.size(); ++i) q_conj[i] = std::conj(q[i]);
    for (std::size_t i = 0; i < a_t.size(); ++i) at_conj[i] = std::conj(a_t[i]);
    CVector left = kron(w, q_conj);         // (w^T kron q^H) as a row
    CVector right = kron(at_conj, a_r);     // column
    Complex s = 0.0;
    for (std::size_t i = 0; i < left.size(); ++i) s += left[i] * right[i];
    return std::sqrt(pilot_power) * s;
}

/// Row form of (w^T kron q^H) applied to vec(H); equals q^H H w.
inline Complex kron_row_times_vec(const CVector& w, const CVector& q,
                                  const CMatrix& h) {
    if (w.size() != h.cols || q.size() != h.rows)
        throw ContractViolation("kron_row_times_vec: dimension mismatch");
    Complex s = 0.0;
    // (w^T kron q^H)[c*rows + r] = w[c] * conj(q[r])
    for (std::size_t c = 0; c < h.cols; ++c)
        for (std::size_t r = 0; r < h.rows; ++r)
            s += w[c] * std::conj(q[r]) * h(r, c);
    return s;
}

/// Gain estimate alpha~ = r_k / beta_k.
inline Complex estimate_gain(Complex r_k, Complex beta_k) {
    if (beta_k == Complex(0.0, 0.0))
        throw SingularBeamformingError("estimate_gain: beta coefficient is zero");
    return r_k / beta_k;
}

}  // namespace uavgan
