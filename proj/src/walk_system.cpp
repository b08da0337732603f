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

#include "nandwalk/walk_system.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "nandwalk/util.hpp"

namespace nandwalk {

const char* term_name(Term term) {
    switch (term) {
        case Term::oracle: return "oracle";
        case Term::driving: return "driving";
        case Term::full: return "full";
    }
    return "?";
}

WalkSystem build_walk_system(const NandInstance& instance, int runway_len, int attach,
                             int dim_cap) {
    if (runway_len < 2) throw std::invalid_argument("build_walk_system: runway length < 2");
    if (attach < 1 || attach > runway_len) {
        throw std::invalid_argument("build_walk_system: attach position outside 1..M");
    }
    const std::int64_t n_leaves = std::int64_t{1} << instance.depth;
    const std::int64_t dim = runway_len + (n_leaves - 1) + 2 * n_leaves;
    if (dim > dim_cap) {
        throw cap_exceeded("build_walk_system: dimension " + std::to_string(dim) +
                           " exceeds cap " + std::to_string(dim_cap));
    }

    WalkSystem sys;
    sys.depth = instance.depth;
    sys.runway_len = runway_len;
    sys.attach = attach;
    sys.dim = static_cast<int>(dim);

    // Runway path.
    for (int j = 1; j < runway_len; ++j) {
        sys.driving_edges.push_back({sys.runway_index(j), sys.runway_index(j + 1), 1.0});
    }
    // Attach point to tree root.
    sys.driving_edges.push_back({sys.runway_index(attach), sys.root_index(), 1.0});
    // Parent-child tree edges, heap order; heap indices >= 2^n are leaves.
    for (std::int64_t heap = 1; heap < n_leaves; ++heap) {
        const int parent = sys.internal_index(static_cast<int>(heap));
        for (std::int64_t child = 2 * heap; child <= 2 * heap + 1; ++child) {
            const int child_vertex = child < n_leaves
                                         ? sys.internal_index(static_cast<int>(child))
                                         : sys.leaf_index(child - n_leaves);
            sys.driving_edges.push_back({parent, child_vertex, 1.0});
        }
    }
    // Oracle couplings for occupied bits only.
    for (std::int64_t k = 0; k < n_leaves; ++k) {
        if (instance.bits[static_cast<std::size_t>(k)]) {
            sys.oracle_pairs.push_back({sys.leaf_index(k), sys.aux_index(k), -1.0});
        }
    }
    return sys;
}

namespace {

void accumulate(const std::vector<WeightedEdge>& edges, const std::vector<double>& x,
                std::vector<double>& y) {
    for (const auto& e : edges) {
        y[e.u] += e.w * x[e.v];
        y[e.v] += e.w * x[e.u];
    }
}

}  // namespace

double operator_norm(const WalkSystem& system, Term term, double rel_tol,
                     int max_iterations) {
    std::mt19937_64 rng(0x6e616e64u);  // fixed seed, deterministic result
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(system.dim), y(system.dim);
    for (auto& v : x) v = gauss(rng);
    double xn = 0.0;
    for (double v : x) xn += v * v;
    xn = std::sqrt(xn);
    for (auto& v : x) v /= xn;

    // ||H x_n|| climbs monotonically to the norm with a geometric tail, so
    // Aitken extrapolation of the increments gives an honest error estimate;
    // the raw per-step change alone understates it when the gap is small.
    double estimate = 0.0, prev1 = 0.0, prev2 = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        std::fill(y.begin(), y.end(), 0.0);
        if (term != Term::driving) accumulate(system.oracle_pairs, x, y);
        if (term != Term::oracle) accumulate(system.driving_edges, x, y);
        double yn = 0.0;
        for (double v : y) yn += v * v;
        yn = std::sqrt(yn);
        if (yn < 1e-14) return 0.0;  // operator annihilates the iterate
        prev2 = prev1;
        prev1 = estimate;
        estimate = yn;
        for (int i = 0; i < system.dim; ++i) x[i] = y[i] / yn;
        if (it >= 2) {
            const double d1 = estimate - prev1;
            const double d0 = prev1 - prev2;
            if (std::abs(d1) <= 1e-13 * estimate) return estimate;
            if (d0 > 0.0 && d1 > 0.0 && d1 < d0) {
                const double q = d1 / d0;
                const double remaining = d1 * q / (1.0 - q);
                if (remaining <= rel_tol * estimate) return estimate + remaining;
            }
        }
    }
    throw std::runtime_error("operator_norm: no convergence after " +
                             std::to_string(max_iterations) + " iterations (estimate " +
                             std::to_string(estimate) + ", term " + term_name(term) + ")");
}

nlohmann::json system_to_json(const WalkSystem& system) {
    nlohmann::json j;
    j["dim"] = system.dim;
    auto& hd = j["h_d_edges"] = nlohmann::json::array();
    for (const auto& e : system.driving_edges) hd.push_back({e.u, e.v});
    auto& ho = j["h_o_pairs"] = nlohmann::json::array();
    for (const auto& e : system.oracle_pairs) ho.push_back({e.u, e.v, e.w});
    return j;
}

}  // namespace nandwalk
