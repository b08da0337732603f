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

#include "nandwalk/nand_tree.hpp"

#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "nandwalk/util.hpp"

namespace nandwalk {

NandInstance::NandInstance(int depth_arg, std::vector<std::uint8_t> bits_arg)
    : depth(depth_arg), bits(std::move(bits_arg)) {
    if (depth < 0 || depth > kMaxDepth) {
        throw std::invalid_argument("NandInstance: depth " + std::to_string(depth) +
                                    " outside [0, " + std::to_string(kMaxDepth) + "]");
    }
    const std::size_t want = std::size_t{1} << depth;
    if (bits.size() != want) {
        throw std::invalid_argument("NandInstance: expected " + std::to_string(want) +
                                    " bits, got " + std::to_string(bits.size()));
    }
    for (auto b : bits) {
        if (b > 1) throw std::invalid_argument("NandInstance: bits must be 0 or 1");
    }
}

NandInstance NandInstance::from_bit_string(int depth, std::string_view s) {
    std::vector<std::uint8_t> bits;
    bits.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("NandInstance: bit string may contain only 0/1");
        }
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return NandInstance(depth, std::move(bits));
}

std::string NandInstance::bit_string() const {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
    return s;
}

int eval_exact(const NandInstance& instance) {
    // Bottom-up over full levels; every leaf is read.
    std::vector<std::uint8_t> level(instance.bits);
    while (level.size() > 1) {
        std::vector<std::uint8_t> next(level.size() / 2);
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] = static_cast<std::uint8_t>(!(level[2 * i] && level[2 * i + 1]));
        }
        level.swap(next);
    }
    return level[0];
}

namespace {

int prune_eval(const NandInstance& inst, int depth, std::size_t first,
               std::mt19937_64& rng, std::uint64_t& queries) {
    if (depth == 0) {
        ++queries;
        return inst.bits[first];
    }
    const std::size_t half = std::size_t{1} << (depth - 1);
    const bool right_first = (rng() & 1u) != 0;
    const std::size_t a = right_first ? first + half : first;
    const std::size_t b = right_first ? first : first + half;
    if (prune_eval(inst, depth - 1, a, rng, queries) == 0) return 1;
    return prune_eval(inst, depth - 1, b, rng, queries) == 0 ? 1 : 0;
}

}  // namespace

PruningResult eval_randomized_pruning(const NandInstance& instance, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PruningResult out;
    out.value = prune_eval(instance, instance.depth, 0, rng, out.queries);
    return out;
}

WorstCaseQueries worst_case_expected_queries(int depth) {
    if (depth < 0 || depth > 1000) {
        throw cap_exceeded("worst_case_expected_queries: depth " + std::to_string(depth) +
                           " outside [0, 1000]");
    }
    WorstCaseQueries w;  // depth 0: (1, 1)
    for (int d = 1; d <= depth; ++d) {
        const double w0 = 2.0 * w.value1;
        const double w1 = w.value0 + 0.5 * w.value1;
        w.value0 = w0;
        w.value1 = w1;
    }
    return w;
}

std::vector<WorstCaseQueries> worst_case_table(int max_depth) {
    std::vector<WorstCaseQueries> table;
    table.reserve(max_depth + 1);
    WorstCaseQueries w;
    table.push_back(w);
    for (int d = 1; d <= max_depth; ++d) {
        const double w0 = 2.0 * w.value1;
        const double w1 = w.value0 + 0.5 * w.value1;
        w.value0 = w0;
        w.value1 = w1;
        table.push_back(w);
    }
    return table;
}

namespace {

void fill_adversarial(std::vector<std::uint8_t>& bits, int depth, std::size_t first,
                      int value, std::mt19937_64& rng) {
    if (depth == 0) {
        bits[first] = static_cast<std::uint8_t>(value);
        return;
    }
    const std::size_t half = std::size_t{1} << (depth - 1);
    if (value == 0) {
        // Root 0 needs both children 1; both subtrees are read regardless
        // of order, so each is the value-1 worst case.
        fill_adversarial(bits, depth - 1, first, 1, rng);
        fill_adversarial(bits, depth - 1, first + half, 1, rng);
    } else {
        // The (0, 1) child pair attains W1; which side holds the 0 child
        // does not affect the expectation.
        const bool zero_on_right = (rng() & 1u) != 0;
        fill_adversarial(bits, depth - 1, first, zero_on_right ? 1 : 0, rng);
        fill_adversarial(bits, depth - 1, first + half, zero_on_right ? 0 : 1, rng);
    }
}

}  // namespace

NandInstance adversarial_instance(int depth, int root_value, std::uint64_t seed) {
    if (root_value != 0 && root_value != 1) {
        throw std::invalid_argument("adversarial_instance: root value must be 0 or 1");
    }
    std::vector<std::uint8_t> bits(std::size_t{1} << depth, 0);
    std::mt19937_64 rng(seed);
    fill_adversarial(bits, depth, 0, root_value, rng);
    return NandInstance(depth, std::move(bits));
}

NandInstance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path.string());
    nlohmann::json j;
    in >> j;
    return NandInstance::from_bit_string(j.at("depth").get<int>(),
                                         j.at("bits").get<std::string>());
}

void save_instance(const NandInstance& instance, const std::filesystem::path& path) {
    nlohmann::json j;
    j["depth"] = instance.depth;
    j["bits"] = instance.bit_string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path.string());
    out << j.dump() << "\n";
}

}  // namespace nandwalk
