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

#include "nandwalk/oracle_gadget.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace nandwalk {

void QueryLedger::charge(std::string_view phase, std::uint64_t count) {
    total += count;
    breakdown[std::string(phase)] += count;
}

nlohmann::json QueryLedger::to_json() const {
    nlohmann::json j;
    j["queries_total"] = total;
    j["breakdown"] = nlohmann::json::object();
    for (const auto& [phase, count] : breakdown) j["breakdown"][phase] = count;
    return j;
}

RegisterState RegisterState::basis(int depth, int b, std::uint64_t k, int a) {
    RegisterState s(depth);
    s.amp[s.index(b, k, a)] = 1.0;
    return s;
}

double RegisterState::norm() const {
    double n = 0.0;
    for (const auto& a : amp) n += std::norm(a);
    return std::sqrt(n);
}

double RegisterState::ancilla_one_probability() const {
    double p = 0.0;
    for (std::size_t i = 1; i < amp.size(); i += 2) p += std::norm(amp[i]);
    return p;
}

void apply_query_oracle(const NandInstance& instance, RegisterState& state,
                        QueryLedger& ledger, std::string_view phase) {
    if (instance.depth != state.depth) {
        throw std::invalid_argument("apply_query_oracle: register/instance depth mismatch");
    }
    const std::uint64_t n_leaves = std::uint64_t{1} << instance.depth;
    for (int b = 0; b <= 1; ++b) {
        for (std::uint64_t k = 0; k < n_leaves; ++k) {
            if (instance.bits[k]) {
                std::swap(state.amp[state.index(b, k, 0)], state.amp[state.index(b, k, 1)]);
            }
        }
    }
    ledger.charge(phase, 1);
}

void apply_controlled_rotation(RegisterState& state, double t) {
    const double c = std::cos(t);
    const Amplitude is(0.0, std::sin(t));
    const std::uint64_t n_leaves = std::uint64_t{1} << state.depth;
    for (std::uint64_t k = 0; k < n_leaves; ++k) {
        const std::size_t i0 = state.index(0, k, 1);
        const std::size_t i1 = state.index(1, k, 1);
        const Amplitude a0 = state.amp[i0];
        const Amplitude a1 = state.amp[i1];
        state.amp[i0] = c * a0 + is * a1;
        state.amp[i1] = is * a0 + c * a1;
    }
}

void gadget_evolve(const NandInstance& instance, RegisterState& state, double t,
                   QueryLedger& ledger, std::string_view phase) {
    if (state.ancilla_one_probability() > 1e-24) {
        throw std::invalid_argument("gadget_evolve: ancilla register not in |0>");
    }
    apply_query_oracle(instance, state, ledger, phase);
    apply_controlled_rotation(state, t);
    apply_query_oracle(instance, state, ledger, phase);
}

StateVec apply_oracle_exponential(const WalkSystem& system, StateVec state, double t,
                                  QueryLedger& ledger, std::string_view phase) {
    if (state.dim() != static_cast<std::size_t>(system.dim)) {
        throw std::invalid_argument("apply_oracle_exponential: dimension mismatch");
    }
    const double c = std::cos(t);
    const Amplitude is(0.0, std::sin(t));
    for (const auto& pair : system.oracle_pairs) {
        const Amplitude leaf = state.amp[pair.u];
        const Amplitude aux = state.amp[pair.v];
        state.amp[pair.u] = c * leaf + is * aux;
        state.amp[pair.v] = is * leaf + c * aux;
    }
    ledger.charge(phase, 2);  // the gadget cost, independent of the input
    return state;
}

Eigen::MatrixXcd gadget_circuit_unitary(const NandInstance& instance, double t,
                                        QueryLedger& ledger) {
    const std::size_t dim = std::size_t{1} << (instance.depth + 2);
    Eigen::MatrixXcd u(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        RegisterState s(instance.depth);
        s.amp[col] = 1.0;
        apply_query_oracle(instance, s, ledger, "circuit");
        apply_controlled_rotation(s, t);
        apply_query_oracle(instance, s, ledger, "circuit");
        for (std::size_t row = 0; row < dim; ++row) u(row, col) = s.amp[row];
    }
    return u;
}

Eigen::MatrixXcd dense_oracle_exponential(const NandInstance& instance, double t) {
    const std::size_t dim = std::size_t{1} << (instance.depth + 1);
    const std::uint64_t n_leaves = std::uint64_t{1} << instance.depth;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (std::uint64_t k = 0; k < n_leaves; ++k) {
        if (instance.bits[k]) {
            h(k, n_leaves + k) = -1.0;
            h(n_leaves + k, k) = -1.0;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    Eigen::VectorXcd phases(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        phases[i] = std::exp(Amplitude(0.0, -solver.eigenvalues()[i] * t));
    }
    return solver.eigenvectors().cast<Amplitude>() * phases.asDiagonal() *
           solver.eigenvectors().transpose().cast<Amplitude>();
}

}  // namespace nandwalk
