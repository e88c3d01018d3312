#pragma once

#include <optional>
#include <vector>

#include "pamap/plmap.hpp"

namespace pamap {

// Outcome of the exact Lebesgue-measure-preservation check: for the midpoint
// of every gap between consecutive distinct node values, the sum of inverse
// absolute slopes over preimage branches must be exactly 1.
struct MeasureCertificate {
    bool verdict = false;
    std::vector<std::pair<Rational, Rational>> witnesses;  // (gap midpoint, branch sum)
    std::optional<Rational> failing_value;
};

// Requires domain = codomain = [0,1]. Plateaus fail fast; the branch
// structure is constant on each gap, so one midpoint per gap is exact.
MeasureCertificate is_measure_preserving(const PLMap& f);

// True iff the pullback measures of f and g agree on [a,b]: the
// inverse-slope-weighted preimage mass matches exactly at the midpoint of
// every gap between pooled node values. Throws UnsupportedError on
// zero-slope pieces.
bool lambda_equivalent(const PLMap& f, const PLMap& g, const Rational& a, const Rational& b);

// h(x) = mu([0,x]) for a piecewise-constant density given as (segment end,
// density) pairs covering [0,1] from the left. Requires positive densities
// with total mass exactly 1; returns the exact PL homeomorphism.
PLMap measure_conjugator(const std::vector<std::pair<Rational, Rational>>& density_breaks);

}  // namespace pamap
