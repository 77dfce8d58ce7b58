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

#include "uavgan/completion.hpp"
#include "uavgan/graph.hpp"
#include "uavgan/spread.hpp"

using namespace uavgan;

namespace {

CompletionParams ring_params() {
    CompletionParams p;  // defaults match the 4-node ring scenario
    return p;
}

CompletionParams complete_params() {
    CompletionParams p;
    p.in_degree = 3;
    p.l_max = 1;
    p.l_loop_min = 2;
    p.rb_budget = 12;
    return p;
}

UavGraph ring_graph(int n) {
    std::vector<UavNode> nodes;
    std::vector<LinkBudget> edges;
    for (int i = 0; i < n; ++i) {
        nodes.push_back({i, {100.0 * i, 0.0, 60.0}, 1000, 10.0, 1});
    }
    for (int i = 0; i < n; ++i) {
        LinkBudget e;
        e.src = i;
        e.dst = (i + 1) % n;
        e.path_gain = 1e-9;
        e.bandwidth_hz = 2e6;
        e.noise_power_w = 8e-15;
        e.tx_power_w = 1.0;
        e.snr = e.tx_power_w * e.path_gain / e.noise_power_w;
        e.rate_bps = e.bandwidth_hz * std::log2(1.0 + e.snr);
        edges.push_back(e);
    }
    return UavGraph::from_edges(std::move(nodes), std::move(edges));
}

}  // namespace

TEST_CASE("closed form piecewise values") {
    auto p = ring_params();
    CHECK(completion_probability(0, p).value == 0.0);
    CHECK(completion_probability(2, p).value == 0.0);
    CHECK(completion_probability(3, p).value == Catch::Approx(0.0405).margin(1e-12));
    CHECK(completion_probability(4, p).value ==
          Catch::Approx(0.0664065).margin(1e-9));
}

TEST_CASE("closed form equals the recursion oracle on the gamma-free grid") {
    for (int l_max = 1; l_max <= 5; ++l_max) {
        for (double eta : {0.1, 0.5, 0.9}) {
            for (double eps : {0.0, 0.1, 0.2}) {
                for (int n_deg : {1, 2, 3}) {
                    CompletionParams p;
                    p.l_max = l_max;
                    p.l_loop_min = l_max + 1;  // widest gamma-free window
                    p.share_ratio = eta;
                    p.disc_error = eps;
                    p.in_degree = n_deg;
                    for (int t = 0; t < l_max + p.l_loop_min; ++t) {
                        const double closed = completion_probability(t, p).value;
                        const double oracle = recursion_oracle(t, p);
                        CHECK(std::abs(closed - oracle) < 1e-12);
                    }
                }
            }
        }
    }
}

TEST_CASE("recursion oracle contracts") {
    auto p = ring_params();
    CHECK_THROWS_AS(recursion_oracle(p.l_max + p.l_loop_min, p), RegimeError);

    // eps -> 1 kills every delivery
    CompletionParams dead = p;
    dead.disc_error = 0.999999;
    for (int t = 0; t < 6; ++t) CHECK(recursion_oracle(t, dead) < 1e-3);

    // lossless relay with no dilution delivers at exactly l_max
    CompletionParams lossless = p;
    lossless.share_ratio = 1.0;
    lossless.disc_error = 0.0;
    lossless.in_degree = 0;
    CHECK(recursion_oracle(lossless.l_max, lossless) == Catch::Approx(1.0));
}

TEST_CASE("curve is monotone, bounded, and clamp-flagged") {
    for (double eta : {0.05, 0.5, 1.0}) {
        for (double eps : {0.0, 0.5, 0.95}) {
            CompletionParams p;
            p.share_ratio = eta;
            p.disc_error = eps;
            auto curve = completion_curve(p, 200);
            for (int t = 1; t <= 200; ++t) {
                const double cur = curve.probability[static_cast<std::size_t>(t)];
                const double prev = curve.probability[static_cast<std::size_t>(t) - 1];
                CHECK(cur >= prev - 1e-15);
                CHECK(cur >= 0.0);
                CHECK(cur <= 1.0);
                // strictly increasing once deliveries begin, until saturation
                if (t > p.l_max && prev < 1.0 && eps < 1.0 && eta > 0.0)
                    CHECK(cur > prev);
            }
        }
    }
    // strong parameters overshoot and clamp with the diagnostic raised
    CompletionParams hot;
    hot.share_ratio = 1.0;
    hot.disc_error = 0.0;
    hot.gamma.target_hazard = 0.9;
    auto curve = completion_curve(hot, 60);
    CHECK(curve.probability[60] == 1.0);
    CHECK(curve.clamped[60]);
}

TEST_CASE("gamma schedules") {
    auto p = ring_params();
    const int t0 = p.regime_boundary();
    SECTION("pinned to one at the boundary, limit 1 + N*eta") {
        for (auto kind : {GammaSchedule::Kind::kSaturating,
                          GammaSchedule::Kind::kLoopHazard}) {
            CompletionParams q = p;
            q.gamma.kind = kind;
            CHECK(gamma_value(q, t0) == 1.0);
            CHECK(gamma_value(q, t0 - 3) == 1.0);
            for (int t = t0 + 1; t < t0 + 200; ++t) CHECK(gamma_value(q, t) >= 1.0);
            const double limit = 1.0 + q.in_degree * q.share_ratio;
            CHECK(gamma_value(q, t0 + 2000) == Catch::Approx(limit).epsilon(1e-6));
        }
    }
    SECTION("saturating kind rises monotonically") {
        CompletionParams q = p;
        q.gamma.kind = GammaSchedule::Kind::kSaturating;
        for (int t = t0 + 1; t < t0 + 60; ++t)
            CHECK(gamma_value(q, t + 1) >= gamma_value(q, t));
    }
}

TEST_CASE("required iterations") {
    SECTION("boundary: confidence below p_G(l_max) stops at l_max") {
        auto p = ring_params();
        p.confidence = 0.02;  // below 0.0405
        auto r = required_iterations(p);
        CHECK(r.iterations == p.l_max);
    }
    SECTION("defaults land on the reference counts") {
        auto ring = ring_params();
        auto r1 = required_iterations(ring);
        CHECK(r1.iterations >= 16);
        CHECK(r1.iterations <= 22);

        auto complete = complete_params();
        auto r2 = required_iterations(complete);
        CHECK(r2.iterations >= 4);
        CHECK(r2.iterations <= 8);
    }
    SECTION("unattainable confidence raises with the cap probability") {
        auto p = ring_params();
        p.disc_error = 0.9;
        p.iteration_cap = 12;
        try {
            required_iterations(p);
            FAIL("expected NonAttainmentError");
        } catch (const NonAttainmentError& e) {
            CHECK(e.probability_at_cap >= 0.0);
            CHECK(e.probability_at_cap < p.confidence);
        }
    }
}

TEST_CASE("completion time") {
    auto p = ring_params();
    p.tx_time = 0.01;
    p.train_time = 0.09;
    CHECK(completion_time(p, 19) == Catch::Approx(1.9));
    CHECK_THROWS_AS(completion_time(p, 0), ContractViolation);
    CompletionParams doubled = p;
    doubled.tx_time *= 2.0;
    doubled.train_time *= 2.0;
    CHECK(completion_time(doubled, 19) == Catch::Approx(2.0 * 1.9));
}

TEST_CASE("communication load") {
    auto p = ring_params();
    auto load = comm_load(p, 19);
    CHECK(load.exact);
    CHECK(load.scalars_int == 418000);
    CHECK(load.scalars == Catch::Approx(418000.0));
    CHECK(load.bits == Catch::Approx(418000.0 * 32));

    // linear in each factor
    auto double_t = comm_load(p, 38);
    CHECK(double_t.scalars == Catch::Approx(2.0 * load.scalars));
    CompletionParams half_eta = p;
    half_eta.share_ratio = 0.25;
    CHECK(comm_load(half_eta, 19).scalars == Catch::Approx(0.5 * load.scalars));
}

TEST_CASE("baseline loads ordering") {
    auto p = ring_params();
    SECTION("large models make parameter shipping dominant") {
        auto loads = baseline_loads(p, 500000, 19);
        CHECK(loads.fl_bits > loads.md_bits);
        CHECK(loads.md_bits > loads.proposed_bits);
        CHECK(loads.md_scalars == Catch::Approx(2.0 * loads.proposed_scalars));
    }
    SECTION("tiny models invert the ordering consistently") {
        const auto param_count = static_cast<std::int64_t>(
            std::llround(p.share_ratio * p.dataset_size * p.sample_scalars / 2.0));
        auto loads = baseline_loads(p, param_count, 19);
        CHECK(loads.fl_bits < loads.md_bits);
        CHECK(loads.fl_bits == Catch::Approx(0.5 * loads.proposed_bits));
    }
    SECTION("one iteration equals the per-iteration values") {
        auto loads = baseline_loads(p, 1000, 1);
        CHECK(loads.proposed_scalars ==
              Catch::Approx(p.share_ratio * p.dataset_size * p.sample_scalars *
                            p.rb_budget));
    }
}

TEST_CASE("spread simulator agrees with the closed form in the gamma-free regime") {
    auto graph = ring_graph(4);
    auto p = ring_params();
    auto curve = spread_simulator(graph, p, 100000, 2024, 12);
    for (int t = 3; t <= 6; ++t) {
        const double closed = completion_probability(t, p).value;
        const double mc = curve.probability[static_cast<std::size_t>(t)];
        const double se = curve.stderr_[static_cast<std::size_t>(t)];
        INFO("T=" << t << " closed=" << closed << " mc=" << mc << " se=" << se);
        CHECK(std::abs(mc - closed) <= 3.0 * se);
    }
}

TEST_CASE("spread simulator deterministic edge cases") {
    auto graph = ring_graph(4);
    SECTION("lossless sharing always arrives exactly at l_max") {
        CompletionParams p;
        p.share_ratio = 1.0;
        p.disc_error = 0.0;
        p.in_degree = 0;  // no dilution
        auto curve = spread_simulator(graph, p, 2000, 7, 8);
        CHECK(curve.probability[2] == 0.0);
        CHECK(curve.probability[3] == 1.0);
    }
    SECTION("independent seeds agree within combined error") {
        auto p = ring_params();
        auto a = spread_simulator(graph, p, 30000, 11, 8);
        auto b = spread_simulator(graph, p, 30000, 12, 8);
        for (int t = 3; t <= 8; ++t) {
            const double se = std::hypot(a.stderr_[static_cast<std::size_t>(t)],
                                         b.stderr_[static_cast<std::size_t>(t)]);
            CHECK(std::abs(a.probability[static_cast<std::size_t>(t)] -
                           b.probability[static_cast<std::size_t>(t)]) <= 3.0 * se);
        }
    }
    SECTION("same seed reproduces the curve bit for bit") {
        auto p = ring_params();
        auto a = spread_simulator(graph, p, 5000, 99, 10);
        auto b = spread_simulator(graph, p, 5000, 99, 10);
        CHECK(a.probability == b.probability);
    }
}

TEST_CASE("parameter validation") {
    CompletionParams p;
    p.share_ratio = 0.0;
    CHECK_THROWS_AS(p.validate(), ContractViolation);
    p = CompletionParams{};
    p.l_loop_min = 1;
    CHECK_THROWS_AS(p.validate(), ContractViolation);
    p = CompletionParams{};
    p.disc_error = 1.0;
    CHECK_THROWS_AS(p.validate(), ContractViolation);
}
