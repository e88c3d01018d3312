#pragma once

#include <cstdint>
#include <vector>

#include "pamap/empirical.hpp"
#include "pamap/measure.hpp"
#include "pamap/plmap.hpp"

namespace pamap {

enum class OrbitMode { exact, floating };

// Truncated inverse-limit point (x0, ..., xd) with x_i = f(x_{i+1}).
struct BackwardOrbit {
    OrbitMode mode = OrbitMode::exact;
    std::vector<Rational> exact_coords;
    std::vector<double> float_coords;
    std::uint64_t map_id = 0;

    int depth() const {
        return static_cast<int>((mode == OrbitMode::exact ? exact_coords.size()
                                                          : float_coords.size())) -
               1;
    }
};

// One backward-branch step weight set at level y: branch positions with
// their 1/|f'| weights. Turning/node branches get averaged one-sided
// weights; at_node reports whether y hit a node value (where the exact
// sum-to-1 identity is not required to hold).
struct BranchSet {
    std::vector<Rational> xs;
    std::vector<Rational> weights;
    bool at_node = false;
    Rational total;
};

BranchSet backward_branches(const PLMap& f, const Rational& y);

// Exact branch-weight sum at a level (the measure-preservation identity
// checked pointwise; equals 1 at non-node levels for certified maps).
Rational exact_branch_weight_sum(const PLMap& f, const Rational& y);

// (f(x0), x0, ..., x_{d-1}); depth preserved. Throws on map hash mismatch.
BackwardOrbit shift_truncated(const PLMap& f, const BackwardOrbit& orbit);

// Backward orbit sampled with branch probabilities 1/|f'|; the unique
// weighting whose every marginal is Lebesgue when f preserves it. Exact
// mode asserts the weight sum is exactly 1 away from node levels.
BackwardOrbit sample_backward(const PLMap& f, const MeasureCertificate& cert, const Rational& x0,
                              int depth, std::uint64_t seed);
BackwardOrbit sample_backward_float(const PLMap& f, const MeasureCertificate& cert, double x0,
                                    int depth, std::uint64_t seed);

// count backward orbits from uniform starts, projected to the first m
// coordinates. Deterministic: orbit i uses derive_seed(seed, i).
EmpiricalMeasure sample_mu_hat(const PLMap& f, const MeasureCertificate& cert, int depth, int m,
                               std::size_t count, std::uint64_t seed, int threads = 0);

enum class TestFn { id, square, indicator };

struct BirkhoffResult {
    double average = 0;
    double target = 0;  // exact space average of the test function
    long steps = 0;
};

BirkhoffResult birkhoff_average(const PLMap& f, double x0, long steps, TestFn fn,
                                double ind_a = 0, double ind_b = 1);

// product-metric distance Sum 2^-i |x_i - y_i| on equal-depth orbits
double truncated_metric(const BackwardOrbit& o1, const BackwardOrbit& o2);

}  // namespace pamap
