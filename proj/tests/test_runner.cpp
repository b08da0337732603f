// Copyright 2026 The nandwalk Authors
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

#include "nandwalk/runner.hpp"

#include <cmath>
#include <fstream>

#include <doctest.h>

#include "nandwalk/fit.hpp"
#include "nandwalk/util.hpp"

using namespace nandwalk;

TEST_CASE("config validation") {
    RunConfig c = RunConfig::calibrated();
    CHECK_NOTHROW(c.validate());
    c.theta = 0.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = RunConfig::calibrated();
    c.time_const = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = RunConfig::calibrated();
    c.order_index = 5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("config JSON round trip") {
    const RunConfig c = RunConfig::calibrated();
    const RunConfig back = RunConfig::from_json(c.to_json());
    CHECK(back.runway_const == c.runway_const);
    CHECK(back.sigma == c.sigma);
    CHECK(back.order_index == c.order_index);
    CHECK(back.time_const == c.time_const);
    CHECK(back.eps_sim == c.eps_sim);
    CHECK(back.theta == c.theta);
    CHECK(back.transmit_means_one == c.transmit_means_one);
}

TEST_CASE("frozen calibration matches the checked-in fixture") {
    std::ifstream in(std::string(NANDWALK_SOURCE_DIR) + "/fixtures/calibration.json");
    REQUIRE(in.good());
    nlohmann::json j;
    in >> j;
    const RunConfig fixture = RunConfig::from_json(j.at("config"));
    const RunConfig code = RunConfig::calibrated();
    CHECK(fixture.runway_const == code.runway_const);
    CHECK(fixture.sigma == code.sigma);
    CHECK(fixture.order_index == code.order_index);
    CHECK(fixture.time_const == code.time_const);
    CHECK(fixture.eps_sim == code.eps_sim);
    CHECK(fixture.theta == code.theta);
    CHECK(fixture.transmit_means_one == code.transmit_means_one);
    CHECK(j.contains("generated_by"));
}

TEST_CASE("planner constants match the checked-in fixture") {
    std::ifstream in(std::string(NANDWALK_SOURCE_DIR) + "/fixtures/trotter_constants.json");
    REQUIRE(in.good());
    nlohmann::json j;
    in >> j;
    const PlannerConstants& c = default_planner_constants();
    for (int k = 1; k <= kMaxOrderIndex; ++k) {
        CHECK(j.at("c").at(std::to_string(k)).get<double>() ==
              doctest::Approx(c.c[k]).epsilon(1e-12));
    }
    CHECK(j.contains("generated_by"));
}

TEST_CASE("run geometry scales as configured") {
    const RunConfig c = RunConfig::calibrated();
    const RunGeometry g2 = run_geometry(2, c);
    CHECK(g2.problem_size == 4);
    CHECK(g2.scale == doctest::Approx(std::sqrt(4.0 * std::log(4.0))));
    CHECK(g2.runway_len ==
          static_cast<int>(std::llround(c.runway_const * std::ceil(g2.scale))));
    CHECK(g2.attach == (g2.runway_len + 1) / 2);
    CHECK(g2.time == doctest::Approx(c.time_const * g2.scale));
    // The packet and its 4-sigma support fit left of the attach point.
    CHECK(g2.center - 4.0 * g2.sigma >= 1.0);
    CHECK(g2.center + 4.0 * g2.sigma <= g2.attach - 1.0);
}

TEST_CASE("end-to-end run decides the stated depth-2 instance") {
    const NandInstance inst = NandInstance::from_bit_string(2, "1111");
    REQUIRE(eval_exact(inst) == 1);
    const RunResult r = run_instance(inst, RunConfig::calibrated());
    CHECK(r.decided_bit == 1);
    CHECK(r.reflected_prob + r.transmitted_prob + r.tree_region_prob ==
          doctest::Approx(1.0).epsilon(1e-9));
    // Query bill follows the closed form for the planned segment count.
    std::uint64_t per_segment = 2;
    for (int i = 1; i < r.config.order_index; ++i) per_segment *= 5;
    CHECK(r.ledger.total == per_segment * static_cast<std::uint64_t>(r.segments));
}

TEST_CASE("runs are deterministic") {
    const NandInstance inst = NandInstance::from_bit_string(2, "0110");
    const RunResult a = run_instance(inst, RunConfig::calibrated());
    const RunResult b = run_instance(inst, RunConfig::calibrated());
    CHECK(a.decided_bit == b.decided_bit);
    CHECK(a.transmitted_prob == b.transmitted_prob);
    CHECK(a.reflected_prob == b.reflected_prob);
    CHECK(a.tree_region_prob == b.tree_region_prob);
    CHECK(a.ledger.total == b.ledger.total);
    nlohmann::json ja = a.to_json(inst), jb = b.to_json(inst);
    ja.erase("wall_seconds");
    jb.erase("wall_seconds");
    CHECK(ja == jb);
}

TEST_CASE("sweep: closed-form queries, slopes below the classical exponent") {
    const RunConfig c = RunConfig::calibrated();
    const auto rows = sweep_scaling(4, 12, c, {1, 2, 3});
    for (const auto& row : rows) {
        std::uint64_t per_segment = 2;
        for (int i = 1; i < row.order_index; ++i) per_segment *= 5;
        CHECK(row.queries == per_segment * static_cast<std::uint64_t>(row.segments));
        CHECK_FALSE(row.executed);
    }
    double previous_slope = 1.0;
    for (int k : {1, 2, 3}) {
        std::vector<double> ns, qs;
        for (const auto& row : rows) {
            if (row.order_index == k) {
                ns.push_back(static_cast<double>(row.problem_size));
                qs.push_back(static_cast<double>(row.queries));
            }
        }
        const FitResult fit = fit_loglog(ns, qs);
        const double expected = (1.0 + 1.0 / (2.0 * k)) / 2.0;
        CHECK(std::abs(fit.slope - expected) <= 0.1);
        CHECK(fit.slope < 0.7537);  // classical exponent dominates every order
        CHECK(fit.slope < previous_slope);
        previous_slope = fit.slope;
    }
}

TEST_CASE("sweep executes small depths and cross-checks the ledger") {
    RunConfig c = RunConfig::calibrated();
    const auto rows = sweep_scaling(2, 3, c, {2}, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].executed);
    CHECK(rows[0].decided_bit == rows[0].exact_bit);
    CHECK_FALSE(rows[1].executed);
}

TEST_CASE("calibration on a small grid finds a consistent polarity") {
    // Reduced grid around the frozen configuration; depth 2 only, so the
    // test stays fast. The full calibration is exercised by the CLI and its
    // outcome is frozen in fixtures/calibration.json.
    CalibrationOptions opt;
    opt.depths = {2};
    opt.runway_grid = {RunConfig::calibrated().runway_const};
    opt.sigma_grid = {RunConfig::calibrated().sigma};
    opt.time_grid = {RunConfig::calibrated().time_const};
    opt.theta_grid = {RunConfig::calibrated().theta};
    opt.validate_with_formula = false;
    const CalibrationOutcome outcome = calibrate(opt);
    CHECK(outcome.polarity_consistent);
    CHECK(outcome.config.transmit_means_one == RunConfig::calibrated().transmit_means_one);
    CHECK(outcome.grid_accuracy.at(2) >= 15.0 / 16.0);
}
