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

#include "nandwalk/oracle_gadget.hpp"
#include "nandwalk/state_vector.hpp"
#include "nandwalk/walk_system.hpp"

namespace nandwalk {

/// One factor of a formula segment; the evolution time is coeff * lambda
/// with lambda = t / segments. Coefficients can be negative for order >= 4.
struct ScheduleFactor {
    Term term = Term::driving;
    double coeff = 0.0;
};

/// Suzuki product-formula schedule for the two-term split. order_index k
/// yields the order-2k formula; one segment holds 5^(k-1) oracle factors
/// and 5^(k-1)+1 driving factors after merging adjacent same-term factors.
struct FormulaSchedule {
    int order_index = 1;  // k; formula order 2k
    double total_time = 0.0;
    std::int64_t segments = 1;  // r
    std::vector<ScheduleFactor> segment_factors;

    double lambda() const { return total_time / static_cast<double>(segments); }
    std::int64_t oracle_factor_count() const;  // per segment
};

inline constexpr int kMaxOrderIndex = 4;  // 5^(k-1) factor growth

/// Base formula S_2(L) = A(L/2) B(L) A(L/2); recursion
/// S_2k(L) = S_(2k-2)(p_k L)^2 S_(2k-2)((1-4 p_k) L) S_(2k-2)(p_k L)^2
/// with p_k = 1 / (4 - 4^(1/(2k-1))). A = driving term, B = oracle term.
FormulaSchedule build_schedule(int order_index, double t, std::int64_t segments);

double suzuki_coefficient(int order_index);  // p_k

/// Per-order planner constants, frozen from the calibration ladders (see
/// fixtures/trotter_constants.json for the generating command).
struct PlannerConstants {
    double c[kMaxOrderIndex + 1];  // c[k], k = 1..kMaxOrderIndex
};
const PlannerConstants& default_planner_constants();

inline constexpr std::int64_t kDefaultSegmentBudget = 1'000'000'000'000LL;

/// Segment count for a target simulation error:
///   r = ceil( (h t)^(1 + 1/(2p)) * (c_k / eps)^(1/(2k)) ),  p = 2k.
/// The exponent on (h t) uses the step-count law for a formula of order
/// p = 2k, which the error-order measurements confirm empirically.
std::int64_t plan_segments(int order_index, double t, double h, double eps_sim,
                           const PlannerConstants& constants = default_planner_constants(),
                           std::int64_t budget = kDefaultSegmentBudget);

/// Applies the schedule left to right. Driving factors evolve exactly via
/// the spectral cache and are merged across segment boundaries; every oracle
/// factor goes through apply_oracle_exponential and charges two queries, so
/// a full run costs exactly 2 * 5^(k-1) * r queries.
StateVec evolve_with_formula(const WalkSystem& system, const SpectralCache& driving_cache,
                             StateVec state, const FormulaSchedule& schedule,
                             QueryLedger& ledger);

/// || formula(probe) - exact(probe) ||_2 with the dense spectral reference
/// for the full Hamiltonian. Requires the dimension within the dense cap.
double measure_error(const WalkSystem& system, double t, int order_index,
                     std::int64_t segments, const StateVec& probe);

/// Reference evolution with graceful degradation: the dense spectral path
/// below the cap, otherwise the order-4 formula with 100x the planned
/// segment count (queries are not billed to any caller ledger).
StateVec reference_evolve(const WalkSystem& system, const StateVec& state, double t);

/// Empirical determination of the planner constants. Error ladders on the
/// depth-2/runway-16 and depth-3/runway-32 systems fit the model
/// err ~ c (h lambda)^(2k) (t / lambda); the frozen c_k additionally cover a
/// declared (h t, eps) envelope so the planner's segment counts keep the
/// measured error within eps there, then carry a 2x safety margin.
struct TrotterCalibration {
    PlannerConstants constants{};
    double fitted_model_c[kMaxOrderIndex + 1] = {0.0, 0.0, 0.0, 0.0, 0.0};
    nlohmann::json to_json() const;
};

TrotterCalibration calibrate_trotter_constants();

}  // namespace nandwalk
