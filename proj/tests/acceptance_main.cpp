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

// Acceptance suite: one line per criterion, non-zero exit when any fails.
// Conservation checks (criterion 7) run inside every evolution here and
// abort the suite on violation.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nandwalk/fit.hpp"
#include "nandwalk/nand_tree.hpp"
#include "nandwalk/oracle_gadget.hpp"
#include "nandwalk/product_formula.hpp"
#include "nandwalk/runner.hpp"
#include "nandwalk/state_vector.hpp"
#include "nandwalk/util.hpp"
#include "nandwalk/walk_system.hpp"

using namespace nandwalk;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

struct ConservationTracker {
    double max_norm_drift = 0.0;
    double max_partition_drift = 0.0;
    double max_energy_drift = 0.0;
    bool violated() const {
        return max_norm_drift > 1e-9 || max_partition_drift > 1e-9 || max_energy_drift > 1e-8;
    }
};

ConservationTracker g_conservation;

NandInstance random_instance(int depth, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> bits(std::size_t{1} << depth);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1);
    return NandInstance(depth, std::move(bits));
}

StateVec random_state(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    StateVec s(dim);
    for (auto& a : s.amp) a = Amplitude(gauss(rng), gauss(rng));
    s.normalize();
    return s;
}

// 1. Gadget exactness: circuit unitary vs dense exponential, <= 1e-12,
//    exactly two queries per invocation.
void criterion_gadget() {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> angle(-6.0, 6.0);
    double max_dev = 0.0;
    bool ledger_ok = true;
    for (int depth = 0; depth <= 3; ++depth) {
        for (int trial = 0; trial < 20; ++trial) {
            const NandInstance inst = random_instance(depth, rng());
            const double t = angle(rng);
            QueryLedger ledger;
            const Eigen::MatrixXcd circuit = gadget_circuit_unitary(inst, t, ledger);
            const Eigen::MatrixXcd expected = dense_oracle_exponential(inst, t);
            ledger_ok = ledger_ok &&
                        ledger.total == 2 * static_cast<std::uint64_t>(circuit.cols());
            const std::size_t block = std::size_t{1} << (depth + 1);
            const std::uint64_t leaves = std::uint64_t{1} << depth;
            RegisterState layout(depth);
            for (std::size_t col = 0; col < block; ++col) {
                const auto ci = layout.index(static_cast<int>(col / leaves), col % leaves, 0);
                for (std::size_t row = 0; row < block; ++row) {
                    const auto ri = layout.index(static_cast<int>(row / leaves), row % leaves, 0);
                    max_dev = std::max(max_dev, std::abs(circuit(ri, ci) - expected(row, col)));
                    const auto ai = layout.index(static_cast<int>(row / leaves), row % leaves, 1);
                    max_dev = std::max(max_dev, std::abs(circuit(ai, ci)));
                }
            }
        }
    }
    std::ostringstream detail;
    detail << "gadget exactness: max entry deviation " << max_dev
           << " (tolerance 1e-12), ledger two queries per invocation "
           << (ledger_ok ? "holds" : "VIOLATED");
    report(1, max_dev <= 1e-12 && ledger_ok, detail.str());
}

// 2. Norm bounds against dense eigensolves.
void criterion_norms() {
    double worst_oracle_dev = 0.0;
    double worst_driving = 0.0;
    bool all_ok = true;
    std::mt19937_64 rng(7);
    for (int depth = 0; depth <= 6; ++depth) {
        for (int runway : {2, 8, 64, 512}) {
            for (int pattern = 0; pattern < 3; ++pattern) {
                NandInstance inst = random_instance(depth, rng());
                if (pattern == 0) std::fill(inst.bits.begin(), inst.bits.end(), 0);
                if (pattern == 1) std::fill(inst.bits.begin(), inst.bits.end(), 1);
                const WalkSystem sys = build_walk_system(inst, runway, (runway + 1) / 2);
                if (sys.dim > 2048) continue;

                const Eigen::MatrixXd ho = dense_operator(sys, Term::oracle);
                const Eigen::MatrixXd hd = dense_operator(sys, Term::driving);
                const double dense_oracle =
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(ho).eigenvalues()
                        .cwiseAbs()
                        .maxCoeff();
                const double dense_driving =
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hd).eigenvalues()
                        .cwiseAbs()
                        .maxCoeff();
                int max_bit = 0;
                for (auto b : inst.bits) max_bit = std::max<int>(max_bit, b);
                const double power_oracle = operator_norm(sys, Term::oracle);
                worst_oracle_dev = std::max(
                    worst_oracle_dev,
                    std::max(std::abs(power_oracle - max_bit), std::abs(dense_oracle - max_bit)));
                worst_driving = std::max(worst_driving, dense_driving);
                if (dense_driving > 3.0 + 1e-6) all_ok = false;
            }
        }
    }
    std::ostringstream detail;
    detail << "norm bounds: |oracle norm - max bit| <= " << worst_oracle_dev
           << " (tolerance 1e-6), max driving norm " << worst_driving << " <= 3 + 1e-6";
    report(2, all_ok && worst_oracle_dev <= 1e-6, detail.str());
}

// 3. Product-formula order on the depth-2, runway-16 system.
void criterion_order() {
    const NandInstance inst = NandInstance::from_bit_string(2, "1011");
    const WalkSystem sys = build_walk_system(inst, 16, 8);
    const StateVec probe = random_state(sys.dim, 99);
    const double t = 2.0;
    bool ok = true;
    std::ostringstream detail;
    detail << "formula order slopes:";
    for (int k : {1, 2}) {
        std::vector<double> lambdas, errors;
        for (std::int64_t r : {5, 10, 20, 40, 80}) {
            errors.push_back(measure_error(sys, t, k, r, probe));
            lambdas.push_back(t / static_cast<double>(r));
        }
        const FitResult fit = fit_loglog(lambdas, errors);
        detail << " k=" << k << ": " << fit.slope << " in [" << 2 * k - 0.3 << ", "
               << 2 * k + 0.5 << "];";
        ok = ok && fit.slope >= 2 * k - 0.3 && fit.slope <= 2 * k + 0.5;
    }
    report(3, ok, detail.str());
}

// 4. Query-count law and planning-only scaling slopes.
void criterion_queries() {
    bool law_ok = true;
    // Direct law check on executed formulas.
    const NandInstance inst = NandInstance::from_bit_string(2, "0110");
    const WalkSystem sys = build_walk_system(inst, 16, 8);
    const SpectralCache driving(sys, Term::driving);
    const StateVec probe = random_state(sys.dim, 5);
    for (int k : {1, 2, 3}) {
        for (std::int64_t r : {1, 3, 7}) {
            QueryLedger ledger;
            evolve_with_formula(sys, driving, probe, build_schedule(k, 1.5, r), ledger);
            std::uint64_t per_segment = 2;
            for (int i = 1; i < k; ++i) per_segment *= 5;
            law_ok = law_ok && ledger.total == per_segment * static_cast<std::uint64_t>(r);
        }
    }

    const RunConfig config = RunConfig::calibrated();
    const auto rows = sweep_scaling(4, 12, config, {1, 2, 3});
    for (const auto& row : rows) {
        std::uint64_t per_segment = 2;
        for (int i = 1; i < row.order_index; ++i) per_segment *= 5;
        law_ok = law_ok && row.queries == per_segment * static_cast<std::uint64_t>(row.segments);
    }

    bool slopes_ok = true;
    std::ostringstream detail;
    detail << "query law " << (law_ok ? "exact" : "VIOLATED") << "; sweep slopes";
    double prev = 1.0;
    for (int k : {1, 2, 3}) {
        std::vector<double> ns, qs;
        for (const auto& row : rows) {
            if (row.order_index == k) {
                ns.push_back(static_cast<double>(row.problem_size));
                qs.push_back(static_cast<double>(row.queries));
            }
        }
        const FitResult fit = fit_loglog(ns, qs);
        const double target = (1.0 + 1.0 / (2.0 * k)) / 2.0;
        detail << " k=" << k << ": " << fit.slope << " (target " << target << " +/- 0.1)";
        slopes_ok = slopes_ok && std::abs(fit.slope - target) <= 0.1 && fit.slope < prev;
        prev = fit.slope;
    }
    report(4, law_ok && slopes_ok, detail.str());
}

void track_run(const RunResult& r) {
    const double partition =
        std::abs(r.reflected_prob + r.transmitted_prob + r.tree_region_prob - 1.0);
    g_conservation.max_partition_drift =
        std::max(g_conservation.max_partition_drift, partition);
}

// 5. End-to-end correctness at desk scale with the frozen calibration.
void criterion_end_to_end() {
    RunConfig config = RunConfig::calibrated();
    config.eps_sim = 1e-2;
    std::ostringstream detail;
    detail << "end-to-end accuracy:";
    bool ok = true;
    for (int depth : {2, 3, 4}) {
        const auto instances = calibration_instances(depth, 40, 20260809);
        int correct = 0;
        for (const auto& inst : instances) {
            const RunResult r = run_instance(inst, config);
            track_run(r);
            if (r.decided_bit == eval_exact(inst)) ++correct;
        }
        const double accuracy = static_cast<double>(correct) / instances.size();
        const double target = depth == 2 ? 15.0 / 16.0 : 0.9;
        detail << " n=" << depth << ": " << correct << "/" << instances.size() << " (target "
               << target << ");";
        ok = ok && accuracy >= target;
    }
    report(5, ok, detail.str());
}

// 6. Classical baseline exponent and evaluator agreement with the recursion.
void criterion_classical() {
    const auto table = worst_case_table(31);
    bool ratio_ok = true;
    for (int d = 20; d <= 30; ++d) {
        const double ratio = std::log2(table[d + 1].worst() / table[d].worst());
        ratio_ok = ratio_ok && ratio >= 0.7530 && ratio <= 0.7545;
    }

    bool empirical_ok = true;
    double worst_rel = 0.0;
    const WorstCaseQueries w8 = worst_case_expected_queries(8);
    for (int i = 0; i < 10; ++i) {
        const int value = i % 2;
        const NandInstance inst = adversarial_instance(8, value, 100 + i);
        double mean = 0.0;
        const int trials = 4000;
        for (int s = 0; s < trials; ++s) {
            mean += static_cast<double>(eval_randomized_pruning(inst, 7000 + s).queries);
        }
        mean /= trials;
        const double expected = value == 0 ? w8.value0 : w8.value1;
        const double rel = std::abs(mean - expected) / expected;
        worst_rel = std::max(worst_rel, rel);
        empirical_ok = empirical_ok && rel <= 0.05;
    }
    std::ostringstream detail;
    detail << "classical baseline: DP ratio in [0.7530, 0.7545] for d in 20..30 "
           << (ratio_ok ? "holds" : "VIOLATED") << "; pruning means within "
           << worst_rel * 100.0 << "% of DP at depth 8 (limit 5%)";
    report(6, ratio_ok && empirical_ok, detail.str());
}

// 7. Conservation and partition suite over the acceptance evolutions.
void criterion_conservation() {
    // Unit norm through formula and exact evolution.
    const NandInstance inst = NandInstance::from_bit_string(3, "10011010");
    const WalkSystem sys = build_walk_system(inst, 32, 16);
    const SpectralCache full(sys, Term::full);
    const SpectralCache driving(sys, Term::driving);
    const StateVec probe = random_state(sys.dim, 1234);

    const StateVec exact = full.evolve(probe, 17.0);
    g_conservation.max_norm_drift =
        std::max(g_conservation.max_norm_drift, std::abs(exact.norm() - 1.0));

    QueryLedger ledger;
    const StateVec formula =
        evolve_with_formula(sys, driving, probe, build_schedule(2, 17.0, 200), ledger);
    g_conservation.max_norm_drift =
        std::max(g_conservation.max_norm_drift, std::abs(formula.norm() - 1.0));

    const double e0 = expected_energy(sys, Term::full, probe);
    const double e1 = expected_energy(sys, Term::full, exact);
    g_conservation.max_energy_drift =
        std::max(g_conservation.max_energy_drift, std::abs(e1 - e0));

    std::ostringstream detail;
    detail << "conservation: norm drift " << g_conservation.max_norm_drift
           << " (<= 1e-9), partition drift " << g_conservation.max_partition_drift
           << " (<= 1e-9), energy drift " << g_conservation.max_energy_drift << " (<= 1e-8)";
    report(7, !g_conservation.violated(), detail.str());
}

}  // namespace

int main() {
    criterion_gadget();
    criterion_norms();
    criterion_order();
    criterion_queries();
    criterion_end_to_end();
    criterion_classical();
    criterion_conservation();
    if (g_conservation.violated()) {
        std::printf("conservation violated: aborting suite\n");
        return 1;
    }
    return g_failures == 0 ? 0 : 1;
}
