#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pamap/crooked.hpp"
#include "pamap/measure.hpp"
#include "pamap/plmap.hpp"

namespace pamap {

// Continuous measure-preserving family with slopes in {+-7, +-21/2}:
// fixed fold pattern on [2/7,1], t-dependent folds on [0,2/7], f(0)=t.
PLMap f_tilde(const Rational& t);

// f_tilde(t) composed with lambda_{n,k} stages, applied right to left.
PLMap g_tilde(const Rational& t, const std::vector<std::pair<int, int>>& stages,
              std::int64_t piece_budget = 5000000);

struct CoveringBudgetError : BudgetError {
    CoveringBudgetError(std::string msg, Rational lo, Rational hi)
        : BudgetError(std::move(msg)), worst_lo(std::move(lo)), worst_hi(std::move(hi)) {}
    Rational worst_lo, worst_hi;  // surviving candidate interval
};

// Smallest N <= cap with g^N(J) = [0,1] for every candidate interval of
// length 3*beta/4 whose left endpoint sits on the beta/4 grid; by interval
// containment this certifies g^N(J) = [0,1] for every |J| >= beta.
int covering_time(const PLMap& g, const Rational& beta, int cap);

// |slope| >= 4 everywhere plus the covering certificate at beta = smallest
// piece width (slope >= 4 makes sub-beta intervals double until they reach
// beta, so this certifies leo).
bool is_admissible(const PLMap& f, int cap = 256);

// Markov leo measure-preserving input: refines the Markov partition (by cut
// point preimages, which keeps it Markov) until every cell image has
// diameter < epsilon, then window-perturbs each cell with the smallest odd
// m putting |slope| >= 4. Result is measure-preserving, admissible, and
// within epsilon of f in the uniform metric.
PLMap make_admissible(const PLMap& f, const Rational& epsilon);

// exact pointwise f^N(x) without composing
Rational eval_iterate(const PLMap& f, int N, const Rational& x);

struct CrookifyBudgets {
    int max_candidates = 4096;
    std::int64_t piece_budget = 5000000;
    int covering_cap = 64;
    std::size_t screen_samples = std::size_t(1) << 18;
    int value_grid_divisions = 4;  // level grid step = delta / divisions
    int threads = 0;               // 0 = hardware
    int n_max = 13;                // odd n candidates 7..n_max
};

struct CrookifyReport {
    int n = 0, k = 0, N = 0;
    Rational eta, delta;
    Rational rho;  // exact sup_distance(F, f)
    bool measure_ok = false;
    CrookednessReport crook;
    // worst-pair data refined to exact rationals and re-verified
    Rational witness_a, witness_b;
    std::optional<CrookedWitness> exact_witness;
    bool witness_verified = false;
    int candidates_tried = 0;
    std::string notes;
};

struct CrookifyResult {
    PLMap F;
    CrookifyReport report;
};

struct CrookifyBudgetError : BudgetError {
    CrookifyBudgetError(std::string msg, std::optional<CrookifyResult> best_)
        : BudgetError(std::move(msg)), best(std::move(best_)) {}
    std::optional<CrookifyResult> best;  // smallest-defect candidate seen
};

// Searches odd n >= 7 and k >= 1 lexicographically in (k, n) under the
// constraint (n+1)/(2(n+k-1)) < eta, forms F = f o lambda_{n,k}, verifies
// rho(F, f) < eta exactly, re-certifies measure preservation, takes N from
// covering_time(F, 1/(n+k-1)), and checks delta-crookedness of F^N (exact
// grid when the iterate fits the piece budget, sampled polyline otherwise).
// Returns the first candidate passing every gate.
CrookifyResult crookify_step(const PLMap& f, const Rational& eta, const Rational& delta,
                             const CrookifyBudgets& budgets);

struct ScheduleStage {
    int n = 0, k = 0, N = 0;
    Rational eta, delta;
};

struct PerturbationSchedule {
    std::vector<ScheduleStage> stages;
    std::vector<Rational> ts;                     // sampled parameters
    std::vector<CrookifyReport> final_reports;    // last stage, one per t
};

std::string serialize_schedule(const PerturbationSchedule& s);
PerturbationSchedule parse_schedule(const std::string& text);

// One stage sequence valid simultaneously for every sampled t: the same
// lambda is composed on the right of the whole family at each stage.
// Per-stage budgets eta_s = eta_total / 2^(s+1) keep the total under
// eta_total.
PerturbationSchedule crookify_family(const std::vector<Rational>& ts, const Rational& eta_total,
                                     const std::vector<Rational>& delta_seq,
                                     const CrookifyBudgets& budgets);

}  // namespace pamap
