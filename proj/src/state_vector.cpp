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

#include "nandwalk/state_vector.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <random>
#include <stdexcept>
#include <string>

namespace nandwalk {

double StateVec::norm() const {
    double s = 0.0;
    for (const auto& a : amp) s += std::norm(a);
    return std::sqrt(s);
}

void StateVec::normalize() {
    const double n = norm();
    if (n <= 0.0) throw std::invalid_argument("StateVec::normalize: zero vector");
    for (auto& a : amp) a /= n;
}

Amplitude inner_product(const StateVec& a, const StateVec& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("inner_product: dimension mismatch");
    Amplitude s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amp[i]) * b.amp[i];
    return s;
}

double distance(const StateVec& a, const StateVec& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::norm(a.amp[i] - b.amp[i]);
    return std::sqrt(s);
}

StateVec basis_state(std::size_t dim, std::size_t index) {
    if (index >= dim) throw std::invalid_argument("basis_state: index out of range");
    StateVec s(dim);
    s.amp[index] = 1.0;
    return s;
}

namespace {
std::atomic<std::uint64_t> g_renormalizations{0};
}

bool enforce_unit_norm(StateVec& state, const char* where) {
    const double n = state.norm();
    if (std::abs(n - 1.0) <= 1e-10) return false;
    state.normalize();
    ++g_renormalizations;
    std::cerr << "nandwalk: renormalized state in " << where << " (norm drift "
              << std::abs(n - 1.0) << ")\n";
    return true;
}

std::uint64_t renormalization_count() { return g_renormalizations.load(); }

StateVec apply_operator(const WalkSystem& system, Term term, const StateVec& state) {
    if (state.dim() != static_cast<std::size_t>(system.dim)) {
        throw std::invalid_argument("apply_operator: dimension mismatch");
    }
    StateVec out(state.dim());
    auto accumulate = [&](const std::vector<WeightedEdge>& edges) {
        for (const auto& e : edges) {
            out.amp[e.u] += e.w * state.amp[e.v];
            out.amp[e.v] += e.w * state.amp[e.u];
        }
    };
    if (term != Term::driving) accumulate(system.oracle_pairs);
    if (term != Term::oracle) accumulate(system.driving_edges);
    return out;
}

double expected_energy(const WalkSystem& system, Term term, const StateVec& state) {
    return inner_product(state, apply_operator(system, term, state)).real();
}

Eigen::MatrixXd dense_operator(const WalkSystem& system, Term term) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(system.dim, system.dim);
    auto accumulate = [&](const std::vector<WeightedEdge>& edges) {
        for (const auto& e : edges) {
            h(e.u, e.v) += e.w;
            h(e.v, e.u) += e.w;
        }
    };
    if (term != Term::driving) accumulate(system.oracle_pairs);
    if (term != Term::oracle) accumulate(system.driving_edges);
    return h;
}

SpectralCache::SpectralCache(const WalkSystem& system, Term term) : term_(term) {
    const int cap = dense_cap();
    if (system.dim > cap) {
        throw cap_exceeded("SpectralCache: dimension " + std::to_string(system.dim) +
                           " exceeds dense cap " + std::to_string(cap) +
                           "; use the product formula instead");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_operator(system, term));
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("SpectralCache: eigensolver failed");
    }
    values_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();

    // Reconstruction spot check on random vectors.
    std::mt19937_64 rng(0x7370ec);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 2; ++trial) {
        Eigen::VectorXd v(system.dim);
        for (int i = 0; i < system.dim; ++i) v[i] = gauss(rng);
        v.normalize();
        StateVec sv(system.dim);
        for (int i = 0; i < system.dim; ++i) sv.amp[i] = v[i];
        const StateVec hv = apply_operator(system, term, sv);
        const Eigen::VectorXd rec = vectors_ * (values_.asDiagonal() * (vectors_.transpose() * v));
        double err = 0.0;
        for (int i = 0; i < system.dim; ++i) err += std::norm(hv.amp[i] - rec[i]);
        if (std::sqrt(err) > 1e-8) {
            throw std::runtime_error("SpectralCache: reconstruction error above 1e-8");
        }
    }
}

StateVec SpectralCache::evolve(const StateVec& state, double t) const {
    if (state.dim() != static_cast<std::size_t>(dim())) {
        throw std::invalid_argument("SpectralCache::evolve: dimension mismatch");
    }
    const int d = dim();
    Eigen::VectorXd re(d), im(d);
    for (int i = 0; i < d; ++i) {
        re[i] = state.amp[i].real();
        im[i] = state.amp[i].imag();
    }
    Eigen::VectorXd wre = vectors_.transpose() * re;
    Eigen::VectorXd wim = vectors_.transpose() * im;
    for (int i = 0; i < d; ++i) {
        const double c = std::cos(values_[i] * t);
        const double s = std::sin(values_[i] * t);
        const double r = wre[i], m = wim[i];
        // (r + i m) * (c - i s)
        wre[i] = r * c + m * s;
        wim[i] = m * c - r * s;
    }
    const Eigen::VectorXd yre = vectors_ * wre;
    const Eigen::VectorXd yim = vectors_ * wim;
    StateVec out(state.dim());
    for (int i = 0; i < d; ++i) out.amp[i] = Amplitude(yre[i], yim[i]);
    enforce_unit_norm(out, "SpectralCache::evolve");
    return out;
}

StateVec exact_evolve(const SpectralCache& cache, const StateVec& state, double t) {
    return cache.evolve(state, t);
}

StateVec prepare_wave_packet(const WalkSystem& system, const PacketSpec& spec) {
    if (spec.sigma <= 0.0) throw std::invalid_argument("prepare_wave_packet: sigma <= 0");
    const double lo = spec.center - 4.0 * spec.sigma;
    const double hi = spec.center + 4.0 * spec.sigma;
    if (lo < 1.0 || hi > system.attach - 1.0) {
        throw std::invalid_argument(
            "prepare_wave_packet: support [" + std::to_string(lo) + ", " + std::to_string(hi) +
            "] leaves [1, " + std::to_string(system.attach - 1) + "] on the runway");
    }
    StateVec s(system.dim);
    for (int j = 1; j <= system.runway_len; ++j) {
        const double d = j - spec.center;
        const double envelope = std::exp(-d * d / (4.0 * spec.sigma * spec.sigma));
        s.amp[system.runway_index(j)] =
            envelope * Amplitude(std::cos(spec.momentum * j), std::sin(spec.momentum * j));
    }
    s.normalize();
    return s;
}

double region_probability(const WalkSystem& system, const StateVec& state, Region region) {
    if (state.dim() != static_cast<std::size_t>(system.dim)) {
        throw std::invalid_argument("region_probability: dimension mismatch");
    }
    double p = 0.0;
    switch (region) {
        case Region::reflected:
            for (int j = 1; j < system.attach; ++j) p += std::norm(state.amp[system.runway_index(j)]);
            break;
        case Region::transmitted:
            for (int j = system.attach + 1; j <= system.runway_len; ++j) {
                p += std::norm(state.amp[system.runway_index(j)]);
            }
            break;
        case Region::scatterer:
            p += std::norm(state.amp[system.runway_index(system.attach)]);
            for (int i = system.runway_len; i < system.dim; ++i) p += std::norm(state.amp[i]);
            break;
    }
    return p;
}

double runway_position_expectation(const WalkSystem& system, const StateVec& state) {
    double s = 0.0;
    for (int j = 1; j <= system.runway_len; ++j) {
        s += j * std::norm(state.amp[system.runway_index(j)]);
    }
    return s;
}

nlohmann::json state_to_json(const StateVec& state) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& a : state.amp) j.push_back({a.real(), a.imag()});
    return j;
}

StateVec state_from_json(const nlohmann::json& j) {
    StateVec s(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        s.amp[i] = Amplitude(j[i][0].get<double>(), j[i][1].get<double>());
    }
    return s;
}

}  // namespace nandwalk
