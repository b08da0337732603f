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

#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "nandwalk/util.hpp"
#include "nandwalk/walk_system.hpp"

namespace nandwalk {

/// Complex amplitude vector over a fixed basis flattening. Public operations
/// keep the 2-norm at 1 within 1e-10; drift beyond that is renormalized and
/// counted (see renormalization_count).
struct StateVec {
    std::vector<Amplitude> amp;

    explicit StateVec(std::size_t dim = 0) : amp(dim) {}
    std::size_t dim() const { return amp.size(); }
    double norm() const;
    void normalize();
};

Amplitude inner_product(const StateVec& a, const StateVec& b);  // <a|b>
double distance(const StateVec& a, const StateVec& b);          // ||a - b||_2

StateVec basis_state(std::size_t dim, std::size_t index);

/// Renormalizes when drift exceeds 1e-10 and logs the event; returns true if
/// a renormalization happened. Total events are visible via
/// renormalization_count() so integrator bugs cannot hide behind it.
bool enforce_unit_norm(StateVec& state, const char* where);
std::uint64_t renormalization_count();

/// y = H x via the edge lists; fixed accumulation order, no normalization.
StateVec apply_operator(const WalkSystem& system, Term term, const StateVec& state);

/// Re <s|H|s>: the energy of a state under one term. Imaginary part is
/// discarded (it vanishes for Hermitian H up to rounding).
double expected_energy(const WalkSystem& system, Term term, const StateVec& state);

/// Dense spectral decomposition of one Hermitian term, used as the exact
/// reference for e^{-iHt}. Construction refuses above dense_cap(); callers
/// beyond the cap must use the product formula instead.
class SpectralCache {
  public:
    SpectralCache(const WalkSystem& system, Term term);

    int dim() const { return static_cast<int>(values_.size()); }
    Term term() const { return term_; }
    const Eigen::VectorXd& eigenvalues() const { return values_; }
    const Eigen::MatrixXd& eigenvectors() const { return vectors_; }

    StateVec evolve(const StateVec& state, double t) const;  // e^{-iHt} state

  private:
    Eigen::VectorXd values_;
    Eigen::MatrixXd vectors_;
    Term term_;
};

StateVec exact_evolve(const SpectralCache& cache, const StateVec& state, double t);

/// Dense materialization of a term, for reference computations only.
Eigen::MatrixXd dense_operator(const WalkSystem& system, Term term);

struct PacketSpec {
    double center = 0.0;
    double sigma = 6.0;
    double momentum = -kPi / 2;  // group velocity +2 toward the tree, energy ~ 0
};

/// Gaussian wave packet on the runway: amplitudes proportional to
/// exp(-(j-center)^2 / 4 sigma^2) * exp(i p j), zero elsewhere, normalized.
/// The support window center +/- 4 sigma must fit inside [1, attach-1].
StateVec prepare_wave_packet(const WalkSystem& system, const PacketSpec& spec);

/// Readout regions partitioning the basis: runway strictly left of the
/// attach point (reflected), strictly right of it (transmitted), and the
/// scatterer (the attach vertex, internal nodes, leaves and aux vertices).
enum class Region { reflected, transmitted, scatterer };

double region_probability(const WalkSystem& system, const StateVec& state, Region region);

/// Mean runway position sum_j j |amp_j|^2 (runway mass only, unnormalized
/// by region weight); diagnostic for packet motion.
double runway_position_expectation(const WalkSystem& system, const StateVec& state);

/// JSON array of [re, im] pairs in flattening order.
nlohmann::json state_to_json(const StateVec& state);
StateVec state_from_json(const nlohmann::json& j);

}  // namespace nandwalk
