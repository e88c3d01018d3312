#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pamap/plmap.hpp"

namespace pamap {

enum class CrookedMode { exact_pair, value_grid, sampled };

std::string to_string(CrookedMode m);

struct WorstPair {
    Rational a, b, c, d;
};

// Witness for one (c,d) preimage pair: c' comes delta-close to b, then d'
// comes delta-close to a, in the required order between c and d.
struct CrookedWitness {
    Rational c, d, c_prime, d_prime;
};

struct CrookedDecision {
    bool crooked = false;
    std::optional<std::pair<Rational, Rational>> violating_cd;
    std::optional<CrookedWitness> tightest_witness;  // smallest search window seen
};

struct CrookednessReport {
    Rational delta;
    CrookedMode mode = CrookedMode::exact_pair;
    bool verdict = false;
    std::optional<WorstPair> worst_pair;
    std::optional<Rational> grid_step;
    std::optional<Rational> defect_estimate;
};

// Exact decision whether f is delta-crooked between values a and b: for
// every ordered preimage pair (c,d) with f(c)=a, f(d)=b, the first entry t*
// into the open band (b-delta, b+delta) strictly between c and d must be
// followed, strictly before d, by a value in the open band (a-delta,
// a+delta). Bands are open; tangential boundary touches do not count.
// Throws UnsupportedError when f has a plateau exactly at level a or b.
CrookedDecision is_crooked_between(const PLMap& f, const Rational& a, const Rational& b,
                                   const Rational& delta);

// Runs the pair decision over the step-grid of the codomain plus all pairs
// of critical values. Evidence, not a certificate over all real pairs.
// only_pairs_closer_than restricts to |a-b| < bound (Lemma-style checks).
CrookednessReport crookedness_grid_check(const PLMap& f, const Rational& delta,
                                         const Rational& step, int threads = 1,
                                         std::optional<Rational> only_pairs_closer_than = {});

// Smallest delta on the dyadic lattice (codomain diameter / 2^lattice_bits
// steps) that passes the critical-value pairs plus `samples` seeded random
// pairs. Deterministic given the seed; monotone in delta by band inclusion.
Rational crookedness_defect_estimate(const PLMap& f, int samples, std::uint64_t seed,
                                     int lattice_bits = 10, int threads = 1);

// Grid check over a sampled polyline (double lane, used for iterates whose
// exact composition exceeds the piece budget).
struct SampledPairWitness {
    double a, b, c, d, c_prime, d_prime, window;
};

struct SampledGridOutcome {
    bool verdict = false;
    std::size_t pairs_checked = 0;
    std::optional<std::array<double, 4>> violation;  // a, b, c, d
    std::optional<SampledPairWitness> tightest;
};

SampledGridOutcome polyline_grid_check(const std::vector<double>& xs,
                                       const std::vector<double>& ys, double delta,
                                       const std::vector<double>& levels, int threads = 1);

struct MincUpdtReport {
    int n = 0, k = 0;
    Rational eps, gamma;
    Rational rho_id;     // exact sup-distance from the identity
    Rational rho_bound;  // eps/2 + gamma
    bool part_i = false;
    bool part_ii = false;
    std::optional<WorstPair> part_ii_worst;
    bool part_iii_diam = false;  // diameters never shrink
    bool part_iii_a = false;     // diam > eps/2 when diam(A) > gamma
    bool part_iii_b = false;     // A inside its image
    bool part_iii_c = false;     // image of B(A,r) inside B(image, r+gamma)
    bool maxima_spacing = false;  // consecutive first-maximum locations gamma apart
    int trials = 0;
    std::string failure_detail;

    bool all_ok() const {
        return part_i && part_ii && part_iii_diam && part_iii_a && part_iii_b && part_iii_c &&
               maxima_spacing;
    }
};

// Exact instantiation of the lambda_{n,k} perturbation lemma: (i) via
// sup_distance, (ii) via the 3*gamma grid check restricted to |a-b| < eps,
// (iii) on seeded random rational intervals with exact interval images,
// plus the gamma-spaced first-maxima observation.
MincUpdtReport verify_minc_updt(int n, int k, int trials, std::uint64_t seed, int threads = 1);

}  // namespace pamap
