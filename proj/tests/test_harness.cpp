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

#include <cmath>
#include <sstream>

#include <doctest.h>

#include "nandwalk/fit.hpp"
#include "nandwalk/nand_tree.hpp"
#include "nandwalk/records.hpp"

using namespace nandwalk;

TEST_CASE("log-log fit recovers exact power laws") {
    const std::vector<double> xs = {1.0, 2.0, 4.0, 8.0, 16.0};
    std::vector<double> ys = xs;
    FitResult fit = fit_loglog(xs, ys);
    CHECK(std::abs(fit.slope - 1.0) <= 1e-12);
    CHECK(std::abs(fit.intercept) <= 1e-12);
    CHECK(fit.r_squared == doctest::Approx(1.0));

    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = 3.0 * std::sqrt(xs[i]);
    fit = fit_loglog(xs, ys);
    CHECK(std::abs(fit.slope - 0.5) <= 1e-12);
    CHECK(fit.intercept == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
}

TEST_CASE("log-log fit input validation") {
    const std::vector<double> two = {1.0, 2.0};
    CHECK_THROWS_AS(fit_loglog(two, two), std::invalid_argument);
    const std::vector<double> xs = {1.0, 2.0, 4.0};
    const std::vector<double> bad = {1.0, -2.0, 4.0};
    CHECK_THROWS_AS(fit_loglog(xs, bad), std::invalid_argument);
    const std::vector<double> flat = {2.0, 2.0, 2.0};
    CHECK_THROWS_AS(fit_loglog(flat, xs), std::invalid_argument);
}

TEST_CASE("worst-case table exponent via the fit, depths 14..24") {
    const auto table = worst_case_table(24);
    std::vector<double> ns, ws;
    for (int d = 14; d <= 24; ++d) {
        ns.push_back(std::pow(2.0, d));
        ws.push_back(table[d].worst());
    }
    const FitResult fit = fit_loglog(ns, ws);
    CHECK(fit.slope == doctest::Approx(0.7537).epsilon(0.0133));  // within 0.01 absolute
    CHECK(fit.r_squared >= 0.9999);
}

TEST_CASE("CSV round trip preserves the body and the fit") {
    std::stringstream buffer;
    {
        nlohmann::json header = make_record_header("nandwalk test", 7);
        CsvWriter writer(buffer, header, {"x", "y"});
        for (double x : {2.0, 4.0, 8.0, 16.0}) {
            writer.write_row({format_double(x), format_double(x * x * 1.5)});
        }
    }
    const std::string first_pass = buffer.str();
    CsvTable table = read_csv(buffer);
    CHECK(table.header.at("seed") == 7);
    CHECK(table.columns == std::vector<std::string>{"x", "y"});
    REQUIRE(table.rows.size() == 4);
    const auto xs = table.numeric_column("x");
    const auto ys = table.numeric_column("y");
    const FitResult fit = fit_loglog(xs, ys);
    CHECK(std::abs(fit.slope - 2.0) <= 1e-12);

    // Byte-identical body when regenerated (timestamps live in the header).
    std::stringstream again;
    {
        nlohmann::json header = make_record_header("nandwalk test", 7);
        CsvWriter writer(again, header, {"x", "y"});
        for (double x : {2.0, 4.0, 8.0, 16.0}) {
            writer.write_row({format_double(x), format_double(x * x * 1.5)});
        }
    }
    auto body_of = [](const std::string& text) {
        return text.substr(text.find('\n') + 1);
    };
    CHECK(body_of(first_pass) == body_of(again.str()));
    CHECK_THROWS_AS(table.numeric_column("absent"), std::invalid_argument);
}
