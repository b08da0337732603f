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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "nandwalk/nand_tree.hpp"
#include "nandwalk/state_vector.hpp"

namespace nandwalk {

/// Monotone count of bit-flip query-oracle invocations, broken down by a
/// caller-chosen phase label. One ledger belongs to one run.
struct QueryLedger {
    std::uint64_t total = 0;
    std::map<std::string, std::uint64_t> breakdown;

    void charge(std::string_view phase, std::uint64_t count = 1);
    nlohmann::json to_json() const;  // {"queries_total": ..., "breakdown": {...}}
};

/// Register-level state over basis |b, k, a> with b, a single qubits and k an
/// n-qubit index register; dimension 2^(n+2). Index layout:
/// (b << (n+1)) | (k << 1) | a.
struct RegisterState {
    int depth = 0;
    std::vector<Amplitude> amp;

    explicit RegisterState(int depth_arg)
        : depth(depth_arg), amp(std::size_t{1} << (depth_arg + 2)) {}

    static RegisterState basis(int depth, int b, std::uint64_t k, int a);

    std::size_t index(int b, std::uint64_t k, int a) const {
        return (static_cast<std::size_t>(b) << (depth + 1)) | (k << 1) |
               static_cast<std::size_t>(a);
    }
    double norm() const;
    double ancilla_one_probability() const;  // mass on a = 1
};

/// The bit-flip query oracle |k, a> -> |k, a XOR x_k>, identity on b.
/// Charges one query. Involution.
void apply_query_oracle(const NandInstance& instance, RegisterState& state,
                        QueryLedger& ledger, std::string_view phase = "query");

/// Controlled rotation with the ancilla as control and b as target:
/// on a = 1 applies [[cos t, i sin t], [i sin t, cos t]] to b. Query-free.
void apply_controlled_rotation(RegisterState& state, double t);

/// The two-query gadget: query oracle, controlled rotation, query oracle.
/// With the ancilla in |0> this implements the oracle-Hamiltonian
/// exponential exactly,
///   |b,k,0> -> cos(x_k t)|b,k,0> + i sin(x_k t)|not b,k,0>,
/// and returns the ancilla to |0>. Refuses if the ancilla is not in |0>.
void gadget_evolve(const NandInstance& instance, RegisterState& state, double t,
                   QueryLedger& ledger, std::string_view phase = "gadget");

/// Fast path of the same evolution on the walk basis: rotates each occupied
/// (leaf, aux) pair by [[cos t, i sin t], [i sin t, cos t]]; identity
/// elsewhere. Always charges the gadget's two queries, also on inputs whose
/// bits are all zero.
StateVec apply_oracle_exponential(const WalkSystem& system, StateVec state, double t,
                                  QueryLedger& ledger, std::string_view phase = "oracle");

/// Full 2^(n+2)-dimensional unitary of the gadget circuit, built column by
/// column from the raw operations (no ancilla precondition), for
/// verification against the dense exponential.
Eigen::MatrixXcd gadget_circuit_unitary(const NandInstance& instance, double t,
                                        QueryLedger& ledger);

/// Dense e^{-i H_O t} on the (b, k) registers (dimension 2^(n+1)), computed
/// by eigendecomposition of the oracle Hamiltonian; the independent
/// reference for the gadget.
Eigen::MatrixXcd dense_oracle_exponential(const NandInstance& instance, double t);

}  // namespace nandwalk
