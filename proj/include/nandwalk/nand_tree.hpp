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
#include <filesystem>
#include <string_view>
#include <vector>

namespace nandwalk {

/// A NAND-tree problem instance: a balanced binary tree of NAND gates over
/// 2^depth input bits. Leaves are stored left-to-right; the subtree of heap
/// node i (root = 1) spans a contiguous bit range.
struct NandInstance {
    int depth = 0;
    std::vector<std::uint8_t> bits;

    static constexpr int kMaxDepth = 20;

    NandInstance(int depth, std::vector<std::uint8_t> bits);
    static NandInstance from_bit_string(int depth, std::string_view bits);

    std::size_t leaf_count() const { return bits.size(); }
    std::string bit_string() const;
};

/// Root value of the NAND tree: value(leaf) = bit, value(node) = NAND of the
/// two child values. Reads every leaf; deterministic.
int eval_exact(const NandInstance& instance);

struct PruningResult {
    int value = 0;
    std::uint64_t queries = 0;  // leaves actually read
};

/// Randomized short-circuit evaluation: at every internal node a uniformly
/// random child is evaluated first; if it evaluates to 0 the node is 1
/// without touching the sibling. Deterministic for a fixed seed.
PruningResult eval_randomized_pruning(const NandInstance& instance, std::uint64_t seed);

/// Adversarial worst-case expected leaf reads of the randomized evaluator,
/// split by root value:
///   W0(0) = W1(0) = 1,  W0(d) = 2 W1(d-1),  W1(d) = W0(d-1) + W1(d-1)/2.
/// The maximization over child-value pairs consistent with the root value is
/// resolved in closed form (the (0,1) pair dominates (0,0) for value 1).
struct WorstCaseQueries {
    double value0 = 1.0;  // W0(d)
    double value1 = 1.0;  // W1(d)
    double worst() const { return value0 > value1 ? value0 : value1; }
};

WorstCaseQueries worst_case_expected_queries(int depth);
std::vector<WorstCaseQueries> worst_case_table(int max_depth);

/// An input attaining the worst-case expectation for the requested root
/// value. Value-1 nodes place their value-0 child on a seeded random side,
/// which does not change the expectation but varies the instance.
NandInstance adversarial_instance(int depth, int root_value, std::uint64_t seed);

/// Instance file format: one JSON object {"depth": n, "bits": "0101..."}.
NandInstance load_instance(const std::filesystem::path& path);
void save_instance(const NandInstance& instance, const std::filesystem::path& path);

}  // namespace nandwalk
