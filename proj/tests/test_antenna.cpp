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

#include <catch2/catch_amalgamated.hpp>

#include "uavgan/antenna.hpp"
#include "uavgan/common.hpp"

using namespace uavgan;

namespace {

CVector random_unit_modulus(Rng& rng, int n) {
    CVector v(static_cast<std::size_t>(n));
    for (auto& c : v) c = std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));
    return v;
}

CVector random_complex(Rng& rng, int n) {
    CVector v(static_cast<std::size_t>(n));
    for (auto& c : v) c = {rng.normal(), rng.normal()};
    return v;
}

// top two singular values via one-sided Jacobi on the columns: rotate column
// pairs until orthogonal, singular values are the final column norms
std::pair<double, double> top_two_singular_values(CMatrix h) {
    const std::size_t m = h.cols;
    auto col_dot = [&](std::size_t p, std::size_t q) {  // h_p^H h_q
        Complex s = 0.0;
        for (std::size_t r = 0; r < h.rows; ++r) s += std::conj(h(r, p)) * h(r, q);
        return s;
    };
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const Complex c = col_dot(p, q);
                const double a = col_dot(p, p).real();
                const double b = col_dot(q, q).real();
                off = std::max(off, std::abs(c));
                if (std::abs(c) <= 1e-300) continue;
                // complex Jacobi rotation zeroing the off-diagonal
                const double tau = (b - a) / (2.0 * std::abs(c));
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                const Complex phase = c / std::abs(c);
                for (std::size_t r = 0; r < h.rows; ++r) {
                    const Complex hp = h(r, p), hq = h(r, q);
                    h(r, p) = cs * hp - sn * std::conj(phase) * hq;
                    h(r, q) = sn * phase * hp + cs * hq;
                }
            }
        }
        if (off < 1e-300) break;
    }
    std::vector<double> sv;
    for (std::size_t p = 0; p < m; ++p) sv.push_back(std::sqrt(col_dot(p, p).real()));
    std::sort(sv.rbegin(), sv.rend());
    return {sv[0], sv.size() > 1 ? sv[1] : 0.0};
}

}  // namespace

TEST_CASE("steering vector basics") {
    auto v = steering_vector(0.0, 4);
    REQUIRE(v.size() == 4);
    for (const auto& c : v) {
        CHECK(c.real() == Catch::Approx(1.0));
        CHECK(c.imag() == Catch::Approx(0.0).margin(1e-15));
    }

    auto two = steering_vector(kPi / 2.0, 2, kPi);
    CHECK(two[0].real() == Catch::Approx(1.0));
    CHECK(two[1].real() == Catch::Approx(-1.0));
    CHECK(std::abs(two[1].imag()) < 1e-12);

    // odd symmetry: negated angle conjugates every entry
    const double phi = 0.7342;
    auto pos = steering_vector(phi, 8);
    auto neg = steering_vector(-phi, 8);
    for (std::size_t i = 0; i < pos.size(); ++i)
        CHECK(std::abs(neg[i] - std::conj(pos[i])) < 1e-12);

    CHECK_THROWS_AS(steering_vector(0.0, 0), ContractViolation);
}

TEST_CASE("mimo channel single path") {
    AntennaConfig cfg;
    cfg.tx_elements = 1;
    cfg.rx_elements = 1;
    auto h = mimo_channel({{Complex(1.0, 0.0), 0.3, 0.9}}, cfg);
    REQUIRE(h.rows == 1);
    REQUIRE(h.cols == 1);
    CHECK(std::abs(h(0, 0) - Complex(1.0, 0.0)) < 1e-12);

    cfg.tx_elements = 4;
    cfg.rx_elements = 2;
    const Complex alpha(0.3, -1.1);
    auto h2 = mimo_channel({{alpha, 0.5, -0.2}}, cfg);
    CHECK(h2.frobenius_norm() ==
          Catch::Approx(std::abs(alpha) * std::sqrt(4.0 * 2.0)));

    // direct outer-product oracle
    auto at = steering_vector(0.5, 4);
    auto ar = steering_vector(-0.2, 2);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            CHECK(std::abs(h2(r, c) - alpha * ar[r] * std::conj(at[c])) < 1e-12);

    // opposite gains on the same angles cancel
    auto hz = mimo_channel({{alpha, 0.5, -0.2}, {-alpha, 0.5, -0.2}}, cfg);
    CHECK(hz.frobenius_norm() < 1e-14);

    CHECK_THROWS_AS(mimo_channel({}, cfg), ContractViolation);
}

TEST_CASE("single-path channels are rank one") {
    AntennaConfig cfg;
    cfg.tx_elements = 6;
    cfg.rx_elements = 4;
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Complex alpha(rng.normal(), rng.normal());
        auto h = mimo_channel({{alpha, rng.uniform(0.0, 2.0 * kPi),
                                rng.uniform(0.0, 2.0 * kPi)}},
                              cfg);
        auto [s1, s2] = top_two_singular_values(h);
        REQUIRE(s1 > 0.0);
        CHECK(s2 < 1e-10 * s1);
    }
}

TEST_CASE("received pilot matches the direct formula") {
    AntennaConfig cfg;
    cfg.tx_elements = 1;
    cfg.rx_elements = 1;
    CMatrix h(1, 1);
    const Complex alpha(0.4, 0.2);
    h(0, 0) = alpha;
    CVector one{Complex(1.0, 0.0)};
    CVector zero{Complex(0.0, 0.0)};
    auto r = received_pilot(h, one, one, 4.0, zero);
    CHECK(std::abs(r - 2.0 * alpha) < 1e-12);

    // zero channel leaves only the combined noise
    CMatrix hz(1, 1);
    CVector noise{Complex(0.1, -0.7)};
    auto rn = received_pilot(hz, one, one, 4.0, noise);
    CHECK(std::abs(rn - noise[0]) < 1e-15);

    CVector bad(2, Complex(1.0, 0.0));
    CHECK_THROWS_AS(received_pilot(h, bad, one, 1.0, zero), ContractViolation);
}

TEST_CASE("beta coefficient factored and kronecker routes agree") {
    SECTION("scalar case") {
        CVector one{Complex(1.0, 0.0)};
        auto b = beta_coefficient(one, one, one, one, 4.0);
        CHECK(std::abs(b - Complex(2.0, 0.0)) < 1e-12);
    }

    SECTION("conjugate-matched pair attains sqrt(P)*M*N") {
        AntennaConfig cfg;
        cfg.tx_elements = 8;
        cfg.rx_elements = 3;
        auto at = steering_vector(0.4, 8);
        auto ar = steering_vector(-0.9, 3);
        auto b = beta_coefficient(at, ar, at, ar, 2.0);
        CHECK(std::abs(b - std::sqrt(2.0) * 8.0 * 3.0) < 1e-9);
    }

    SECTION("routes agree on random draws") {
        Rng rng(3);
        for (int trial = 0; trial < 100; ++trial) {
            const int m = 1 + static_cast<int>(rng.uniform_index(6));
            const int n = 1 + static_cast<int>(rng.uniform_index(5));
            auto w = random_unit_modulus(rng, m);
            auto q = random_unit_modulus(rng, n);
            auto at = random_complex(rng, m);
            auto ar = random_complex(rng, n);
            const double p = rng.uniform(0.1, 9.0);
            auto b1 = beta_coefficient(w, q, at, ar, p);
            auto b2 = beta_coefficient_kron(w, q, at, ar, p);
            CHECK(std::abs(b1 - b2) <= 1e-10 * std::max(1.0, std::abs(b1)));
        }
    }
}

TEST_CASE("kronecker identity against q^H H w") {
    Rng rng(5);
    AntennaConfig cfg;
    for (int trial = 0; trial < 100; ++trial) {
        cfg.tx_elements = 1 + static_cast<int>(rng.uniform_index(6));
        cfg.rx_elements = 1 + static_cast<int>(rng.uniform_index(5));
        std::vector<PathComponent> paths;
        const int n_paths = 1 + static_cast<int>(rng.uniform_index(3));
        for (int l = 0; l < n_paths; ++l)
            paths.push_back({{rng.normal(), rng.normal()},
                             rng.uniform(0.0, 2.0 * kPi),
                             rng.uniform(0.0, 2.0 * kPi)});
        auto h = mimo_channel(paths, cfg);
        auto w = random_unit_modulus(rng, cfg.tx_elements);
        auto q = random_unit_modulus(rng, cfg.rx_elements);

        const Complex via_kron = kron_row_times_vec(w, q, h);
        CVector noise(static_cast<std::size_t>(cfg.rx_elements), Complex(0.0, 0.0));
        const Complex direct = received_pilot(h, w, q, 1.0, noise);
        CHECK(std::abs(via_kron - direct) <=
              1e-10 * std::max(1.0, std::abs(direct)));

        // full vec/kron assembly as an extra route
        auto vh = vec(h);
        CVector qc(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) qc[i] = std::conj(q[i]);
        auto lhs_vec = kron(w, qc);
        Complex assembled = 0.0;
        for (std::size_t i = 0; i < lhs_vec.size(); ++i) assembled += lhs_vec[i] * vh[i];
        CHECK(std::abs(assembled - direct) <=
              1e-10 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("gain estimation") {
    SECTION("noiseless pilot recovers the gain exactly") {
        AntennaConfig cfg;
        cfg.tx_elements = 4;
        cfg.rx_elements = 2;
        const Complex alpha(2.5e-5, -1.0e-5);
        const double aod = 0.3, aoa = -0.4;
        auto h = mimo_channel({{alpha, aod, aoa}}, cfg);
        auto at = steering_vector(aod, 4);
        auto ar = steering_vector(aoa, 2);
        CVector noise(2, Complex(0.0, 0.0));
        auto r = received_pilot(h, at, ar, 2.0, noise);
        auto beta = beta_coefficient(at, ar, at, ar, 2.0);
        auto est = estimate_gain(r, beta);
        CHECK(std::abs(est - alpha) < 1e-15);
    }

    SECTION("zero beta is singular") {
        CHECK_THROWS_AS(estimate_gain(Complex(1.0, 0.0), Complex(0.0, 0.0)),
                        SingularBeamformingError);
    }

    SECTION("estimator is unbiased and has the predicted variance") {
        AntennaConfig cfg;
        cfg.tx_elements = 4;
        cfg.rx_elements = 3;
        const Complex alpha(3.0e-5, 2.0e-5);
        const double aod = 0.2, aoa = 0.6, power = 1.5, nvar = 1e-9;
        auto h = mimo_channel({{alpha, aod, aoa}}, cfg);
        auto at = steering_vector(aod, 4);
        auto ar = steering_vector(aoa, 3);
        auto beta = beta_coefficient(at, ar, at, ar, power);

        Rng rng(17);
        const int pilots = 10000;
        Complex sum = 0.0;
        double sq = 0.0;
        for (int p = 0; p < pilots; ++p) {
            CVector noise(3);
            for (auto& z : noise) z = rng.cnormal(nvar);
            auto est = estimate_gain(received_pilot(h, at, ar, power, noise), beta);
            sum += est;
            sq += std::norm(est - alpha);
        }
        const Complex mean = sum / static_cast<double>(pilots);
        const double pred_var = nvar * 3.0 / std::norm(beta);
        const double se = std::sqrt(pred_var / pilots);
        CHECK(std::abs(mean - alpha) < 3.0 * se);
        CHECK(sq / pilots == Catch::Approx(pred_var).epsilon(0.1));
    }
}

TEST_CASE("grid codebook") {
    AntennaConfig cfg;
    cfg.tx_elements = 8;
    cfg.rx_elements = 4;
    auto cb = make_grid_codebook(cfg, 9, 9);
    REQUIRE(cb.size() == 81);
    cb.validate();
    CHECK(cb.at(1).w.size() == 8);
    CHECK(cb.at(81).q.size() == 4);
    CHECK_THROWS_AS(cb.at(0), ContractViolation);
    CHECK_THROWS_AS(cb.at(82), ContractViolation);
    // angle pairs are unique per index
    for (int a = 1; a <= 81; ++a)
        for (int b = a + 1; b <= 81; ++b)
            CHECK((cb.at(a).aod != cb.at(b).aod || cb.at(a).aoa != cb.at(b).aoa));
}
