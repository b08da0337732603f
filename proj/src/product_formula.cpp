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

#include "nandwalk/product_formula.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "nandwalk/util.hpp"

namespace nandwalk {

std::int64_t FormulaSchedule::oracle_factor_count() const {
    std::int64_t n = 0;
    for (const auto& f : segment_factors) n += (f.term == Term::oracle) ? 1 : 0;
    return n;
}

double suzuki_coefficient(int order_index) {
    if (order_index < 2) throw std::invalid_argument("suzuki_coefficient: order index < 2");
    return 1.0 / (4.0 - std::pow(4.0, 1.0 / (2.0 * order_index - 1.0)));
}

namespace {

void append_scaled(std::vector<ScheduleFactor>& out, const std::vector<ScheduleFactor>& base,
                   double scale) {
    for (const auto& f : base) out.push_back({f.term, f.coeff * scale});
}

std::vector<ScheduleFactor> merge_adjacent(const std::vector<ScheduleFactor>& factors) {
    std::vector<ScheduleFactor> merged;
    for (const auto& f : factors) {
        if (!merged.empty() && merged.back().term == f.term) {
            merged.back().coeff += f.coeff;
        } else {
            merged.push_back(f);
        }
    }
    return merged;
}

std::vector<ScheduleFactor> suzuki_segment(int k) {
    if (k == 1) {
        return {{Term::driving, 0.5}, {Term::oracle, 1.0}, {Term::driving, 0.5}};
    }
    const auto inner = suzuki_segment(k - 1);
    const double p = suzuki_coefficient(k);
    std::vector<ScheduleFactor> out;
    out.reserve(5 * inner.size());
    append_scaled(out, inner, p);
    append_scaled(out, inner, p);
    append_scaled(out, inner, 1.0 - 4.0 * p);
    append_scaled(out, inner, p);
    append_scaled(out, inner, p);
    return merge_adjacent(out);
}

std::int64_t ipow5(int e) {
    std::int64_t v = 1;
    for (int i = 0; i < e; ++i) v *= 5;
    return v;
}

}  // namespace

FormulaSchedule build_schedule(int order_index, double t, std::int64_t segments) {
    if (order_index < 1 || order_index > kMaxOrderIndex) {
        throw cap_exceeded("build_schedule: order index " + std::to_string(order_index) +
                           " outside [1, " + std::to_string(kMaxOrderIndex) + "]");
    }
    if (segments < 1) throw std::invalid_argument("build_schedule: segments < 1");
    if (!(t > 0.0)) throw std::invalid_argument("build_schedule: time must be positive");

    FormulaSchedule s;
    s.order_index = order_index;
    s.total_time = t;
    s.segments = segments;
    s.segment_factors = suzuki_segment(order_index);

    double sum_a = 0.0, sum_b = 0.0;
    for (const auto& f : s.segment_factors) {
        (f.term == Term::driving ? sum_a : sum_b) += f.coeff;
    }
    if (std::abs(sum_a - 1.0) > 1e-12 || std::abs(sum_b - 1.0) > 1e-12 ||
        s.oracle_factor_count() != ipow5(order_index - 1)) {
        throw std::runtime_error("build_schedule: segment invariants violated");
    }
    return s;
}

const PlannerConstants& default_planner_constants() {
    // Frozen by the trotter calibration run recorded in
    // fixtures/trotter_constants.json; covers the soundness envelope there.
    static const PlannerConstants constants{{0.0, 6.874888339946098, 0.01, 0.01, 0.01}};
    return constants;
}

std::int64_t plan_segments(int order_index, double t, double h, double eps_sim,
                           const PlannerConstants& constants, std::int64_t budget) {
    if (order_index < 1 || order_index > kMaxOrderIndex) {
        throw cap_exceeded("plan_segments: order index outside [1, " +
                           std::to_string(kMaxOrderIndex) + "]");
    }
    if (!(t > 0.0) || !(h > 0.0)) throw std::invalid_argument("plan_segments: t, h must be > 0");
    if (!(eps_sim > 0.0) || eps_sim >= 1.0) {
        throw std::invalid_argument("plan_segments: eps_sim must lie in (0, 1)");
    }
    const int p = 2 * order_index;
    const double c = constants.c[order_index];
    const double raw = std::pow(h * t, 1.0 + 1.0 / (2.0 * p)) *
                       std::pow(c / eps_sim, 1.0 / (2.0 * order_index));
    const double r = std::ceil(raw);
    if (!(r >= 1.0)) return 1;
    if (r > static_cast<double>(budget)) {
        throw cap_exceeded("plan_segments: computed r = " + std::to_string(r) +
                           " exceeds budget " + std::to_string(budget));
    }
    return static_cast<std::int64_t>(r);
}

StateVec evolve_with_formula(const WalkSystem& system, const SpectralCache& driving_cache,
                             StateVec state, const FormulaSchedule& schedule,
                             QueryLedger& ledger) {
    if (state.dim() != static_cast<std::size_t>(system.dim) ||
        driving_cache.dim() != system.dim || driving_cache.term() != Term::driving) {
        throw std::invalid_argument("evolve_with_formula: system/cache/state mismatch");
    }
    const double lambda = schedule.lambda();
    double pending_driving = 0.0;
    auto flush = [&]() {
        if (pending_driving != 0.0) {
            state = driving_cache.evolve(state, pending_driving);
            pending_driving = 0.0;
        }
    };
    for (std::int64_t seg = 0; seg < schedule.segments; ++seg) {
        for (const auto& f : schedule.segment_factors) {
            if (f.term == Term::driving) {
                pending_driving += f.coeff * lambda;  // merges across boundaries
            } else {
                flush();
                state = apply_oracle_exponential(system, std::move(state), f.coeff * lambda,
                                                 ledger, "formula");
            }
        }
    }
    flush();
    enforce_unit_norm(state, "evolve_with_formula");
    return state;
}

double measure_error(const WalkSystem& system, double t, int order_index,
                     std::int64_t segments, const StateVec& probe) {
    if (t == 0.0) return 0.0;
    const SpectralCache full_cache(system, Term::full);
    const SpectralCache driving_cache(system, Term::driving);
    const StateVec exact = full_cache.evolve(probe, t);
    QueryLedger scratch;
    const StateVec approx = evolve_with_formula(
        system, driving_cache, probe, build_schedule(order_index, t, segments), scratch);
    return distance(approx, exact);
}

namespace {

/// e^{-i H_D tau} x by the Chebyshev expansion
///   e^{-i H tau} = sum_m (2 - [m = 0]) (-i)^m J_m(a tau) T_m(H / a)
/// with a = 3 bounding the driving spectrum. Sparse matvecs only, so it
/// scales past the dense cap; truncated once the Bessel tail is below 1e-15.
StateVec chebyshev_driving_step(const WalkSystem& system, const StateVec& x, double tau) {
    if (tau == 0.0) return x;
    const double a = 3.0;
    const double z = a * tau;
    const double az = std::abs(z);
    const int m_cap = static_cast<int>(az) + 80;

    StateVec prev = x;                                       // T_0(H/a) x
    StateVec cur = apply_operator(system, Term::driving, x);  // a T_1(H/a) x
    for (auto& v : cur.amp) v /= a;

    StateVec out(x.dim());
    // m = 0 term.
    {
        const double j0 = std::cyl_bessel_j(0.0, az);
        for (std::size_t i = 0; i < x.dim(); ++i) out.amp[i] = j0 * prev.amp[i];
    }
    for (int m = 1; m <= m_cap; ++m) {
        double jm = std::cyl_bessel_j(static_cast<double>(m), az);
        if (z < 0.0 && (m & 1)) jm = -jm;  // J_m(-z) = (-1)^m J_m(z)
        // (-i)^m cycle: 1, -i, -1, i.
        Amplitude c;
        switch (m & 3) {
            case 0: c = Amplitude(2.0 * jm, 0.0); break;
            case 1: c = Amplitude(0.0, -2.0 * jm); break;
            case 2: c = Amplitude(-2.0 * jm, 0.0); break;
            default: c = Amplitude(0.0, 2.0 * jm); break;
        }
        for (std::size_t i = 0; i < x.dim(); ++i) out.amp[i] += c * cur.amp[i];
        if (m > az && std::abs(jm) < 1e-15) break;
        // T_{m+1} = 2 (H/a) T_m - T_{m-1}
        StateVec next = apply_operator(system, Term::driving, cur);
        for (std::size_t i = 0; i < x.dim(); ++i) {
            next.amp[i] = 2.0 * next.amp[i] / a - prev.amp[i];
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    return out;
}

}  // namespace

StateVec reference_evolve(const WalkSystem& system, const StateVec& state, double t) {
    if (t == 0.0) return state;
    if (system.dim <= dense_cap()) {
        return SpectralCache(system, Term::full).evolve(state, t);
    }
    if (t < 0.0) {
        throw std::invalid_argument("reference_evolve: negative time above the dense cap");
    }
    const std::int64_t planned = plan_segments(2, t, 3.0, 1e-2);
    const FormulaSchedule schedule = build_schedule(2, t, 100 * planned);
    const double lambda = schedule.lambda();
    QueryLedger scratch;
    StateVec s = state;
    double pending_driving = 0.0;
    for (std::int64_t seg = 0; seg < schedule.segments; ++seg) {
        for (const auto& f : schedule.segment_factors) {
            if (f.term == Term::driving) {
                pending_driving += f.coeff * lambda;
            } else {
                s = chebyshev_driving_step(system, s, pending_driving);
                pending_driving = 0.0;
                s = apply_oracle_exponential(system, std::move(s), f.coeff * lambda, scratch);
            }
        }
    }
    s = chebyshev_driving_step(system, s, pending_driving);
    enforce_unit_norm(s, "reference_evolve");
    return s;
}

nlohmann::json TrotterCalibration::to_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["c"] = nlohmann::json::object();
    j["model_c"] = nlohmann::json::object();
    for (int k = 1; k <= kMaxOrderIndex; ++k) {
        j["c"][std::to_string(k)] = constants.c[k];
        j["model_c"][std::to_string(k)] = fitted_model_c[k];
    }
    return j;
}

TrotterCalibration calibrate_trotter_constants() {
    struct LadderSystem {
        WalkSystem system;
        StateVec probe;
    };
    auto make_ladder_system = [](int depth, const char* bits, int runway,
                                 std::uint64_t seed) {
        const WalkSystem sys =
            build_walk_system(NandInstance::from_bit_string(depth, bits), runway, runway / 2);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        StateVec probe(sys.dim);
        for (auto& a : probe.amp) a = Amplitude(gauss(rng), gauss(rng));
        probe.normalize();
        return LadderSystem{sys, probe};
    };
    const LadderSystem ladder_a = make_ladder_system(2, "1011", 16, 11);
    const LadderSystem ladder_b = make_ladder_system(3, "10110100", 32, 12);

    TrotterCalibration out;
    const double h = 3.0;
    for (int k = 1; k <= kMaxOrderIndex; ++k) {
        double model_c = 0.0;
        for (const LadderSystem* ls : {&ladder_a, &ladder_b}) {
            const double t = 4.0;
            for (std::int64_t r = 2; r <= 64; r *= 2) {
                const double lambda = t / static_cast<double>(r);
                const double err = measure_error(ls->system, t, k, r, ls->probe);
                if (err < 1e-9 || err > 0.3) continue;  // out of the model regime
                model_c = std::max(model_c, err / (std::pow(h * lambda, 2 * k) * (t / lambda)));
            }
        }
        if (model_c == 0.0) model_c = 1e-6;  // errors below the floor everywhere
        out.fitted_model_c[k] = model_c;

        // Inflate so the planner's (h t)^(1 + 1/(4k)) budget stays sound over
        // the declared envelope, since the fitted model scales with the
        // steeper (h t)^(1 + 1/(2k - 1)).
        const double eps = 1e-2;
        double c_k = model_c;
        for (double ht : {3.0 * 28.0, 3.0 * 55.0, 3.0 * 95.0}) {
            const double needed = std::pow(eps, -1.0 / (2.0 * k - 1.0)) *
                                  std::pow(ht, (2.0 * k + 1.0) / (2.0 * (2.0 * k - 1.0))) *
                                  std::pow(model_c, 2.0 * k / (2.0 * k - 1.0));
            c_k = std::max(c_k, needed);
        }
        // Floor at the envelope eps so (c_k / eps)^(1/2k) never shrinks the
        // plan below (h t)^(1 + 1/2p); smaller plans would leave h lambda
        // near 1, outside the regime the fitted model is valid in.
        out.constants.c[k] = std::max(2.0 * c_k, eps);
    }

    // Verify: the planner's segment counts must keep the measured error
    // within eps on both ladder systems at run-scale times.
    for (int k = 1; k <= 2; ++k) {
        for (int attempt = 0; attempt < 6; ++attempt) {
            bool sound = true;
            for (const auto& [ls, t] : {std::pair{&ladder_a, 28.0}, std::pair{&ladder_b, 55.0}}) {
                const double eps = 1e-2;
                const std::int64_t r = plan_segments(k, t, h, eps, out.constants);
                if (measure_error(ls->system, t, k, r, ls->probe) > eps) sound = false;
            }
            if (sound) break;
            out.constants.c[k] *= 2.0;
        }
    }
    return out;
}

}  // namespace nandwalk
