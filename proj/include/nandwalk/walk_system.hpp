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

#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "nandwalk/nand_tree.hpp"

namespace nandwalk {

/// Which Hermitian term of the walk Hamiltonian an operation acts with.
/// `oracle` is the input-dependent leaf/aux coupling, `driving` the
/// input-independent runway-plus-tree adjacency, `full` their sum.
enum class Term { oracle, driving, full };

const char* term_name(Term term);

struct WeightedEdge {
    int u = 0;
    int v = 0;
    double w = 1.0;
};

/// Vertex-indexed walk system. Flattening order: runway positions 1..M
/// (ascending), internal tree nodes in heap order (root = heap index 1),
/// then leaf(k) ascending, then aux(k) ascending. For depth 0 there are no
/// internal nodes and the tree root is leaf(0).
///
/// driving_edges holds the weight +1 adjacency: the runway path, the
/// attach-to-root edge and all parent-child tree edges. oracle_pairs holds
/// one weight -1 leaf(k)-aux(k) edge for every k with x_k = 1; bits with
/// x_k = 0 contribute nothing.
struct WalkSystem {
    int depth = 0;
    int runway_len = 0;  // M
    int attach = 0;      // runway position in 1..M carrying the root edge
    int dim = 0;
    std::vector<WeightedEdge> driving_edges;
    std::vector<WeightedEdge> oracle_pairs;

    std::int64_t leaves() const { return std::int64_t{1} << depth; }

    int runway_index(int j) const { return j - 1; }  // j in 1..M
    int internal_index(int heap) const { return runway_len + heap - 1; }
    int leaf_index(std::int64_t k) const {
        return static_cast<int>(runway_len + (leaves() - 1) + k);
    }
    int aux_index(std::int64_t k) const {
        return static_cast<int>(runway_len + (leaves() - 1) + leaves() + k);
    }
    int root_index() const { return depth == 0 ? leaf_index(0) : internal_index(1); }
};

inline constexpr int kDefaultDimCap = 1 << 16;

WalkSystem build_walk_system(const NandInstance& instance, int runway_len, int attach,
                             int dim_cap = kDefaultDimCap);

/// Spectral norm by power iteration on the operator itself. Adjacency-type
/// spectra can carry +/- extremal pairs, so convergence is tracked through
/// the growth ratio ||H x|| rather than a Rayleigh quotient.
double operator_norm(const WalkSystem& system, Term term, double rel_tol = 1e-6,
                     int max_iterations = 2000000);

/// {"dim": D, "h_d_edges": [[u,v],...], "h_o_pairs": [[leaf,aux,weight],...]}
nlohmann::json system_to_json(const WalkSystem& system);

}  // namespace nandwalk
