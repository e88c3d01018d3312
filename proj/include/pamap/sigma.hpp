#pragma once

#include "pamap/plmap.hpp"

namespace pamap {

// 1, 2, 5, 12, 29, 70, 169, ...  (scr[n] = 2 scr[n-1] + scr[n-2])
BigInt scr(int n);

// Three-branch splice of g2 | reversed g1 | g2, scaled into horizontal
// strips of height 1/m. Requires g1, g2 fixing 0 and 1, 0 < s < 1/2, m >= 3.
PLMap phi(const PLMap& g1, const PLMap& g2, const Rational& s, int m);

// Simple n-crooked map. sigma(1) = sigma(2) = id; sigma(n) recurses through
// phi with s_n = scr[n-1]/scr[n]; sigma(-n) is the vertical reflection.
// Every piece has slope +-scr(n)/n. Memoized.
PLMap sigma(int n);

// Halves used as lambda-hat building blocks (node inserted at 1/2).
PLMap sigma_left_half(int n);   // restriction to [0,1/2]
PLMap sigma_right_half(int n);  // restriction to [1/2,1]

}  // namespace pamap
