#pragma once

#include <optional>

#include "pamap/plmap.hpp"

namespace pamap {

struct WindowPerturbation {
    PLMap map;
    // Even m with f(a) != f(b) cannot rejoin f continuously at b; the
    // returned map takes the accordion value at b and the mismatch is
    // reported here instead of being silently smoothed away.
    std::optional<Rational> discontinuity_at;
};

// Regular m-fold window perturbation: f on [a,b] replaced by m accordion
// copies of f|[a,b] (even folds forward, odd folds reversed), unchanged
// outside. Odd m matches the endpoints, so the result is continuous and
// lambda-equivalent to f on [a,b].
WindowPerturbation window_perturbation(const PLMap& f, const Rational& a, const Rational& b,
                                       int m);

}  // namespace pamap
