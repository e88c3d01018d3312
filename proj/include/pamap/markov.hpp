#pragma once

#include <string>
#include <vector>

#include "pamap/plmap.hpp"

namespace pamap {

struct MarkovSystem {
    std::vector<Rational> partition;          // cut points, includes 0 and 1
    std::vector<std::vector<int>> transition;  // 0/1 covering matrix
    bool is_markov = false;
    bool is_leo = false;
    Rational min_slope;  // min |f'|
    std::string note;    // "not Markov (budget)" and similar diagnostics
};

// Closes the node x-coordinates under the forward orbit (up to orbit_budget
// added points). If closure is reached the partition is Markov for a PL map;
// the covering matrix then decides leo via primitivity (boolean powers up to
// the Wielandt bound).
MarkovSystem markov_analysis(const PLMap& f, int orbit_budget = 10000);

// some boolean power of m is entrywise positive
bool matrix_primitive(const std::vector<std::vector<int>>& m);

}  // namespace pamap
