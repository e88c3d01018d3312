#pragma once

#include <vector>

#include "pamap/plmap.hpp"

namespace pamap {

// half-width of the reflected-sigma collars inside each unit block
Rational lambda_eta(int n);

// Map on [0, n+k-1] -> [0, (2n+k-2)/n] splicing sigma_right(-(n-1)),
// sigma(n), sigma_left(-(n-1)) into every unit block, with uniform slope
// (scr(n)+scr(n-1))/n. n odd >= 7, k >= 1.
PLMap lambda_hat(int n, int k);

// Measure-preserving self-map of [0,1]: lambda_hat rescaled onto the
// 1/(n+k-1) grid and folded back into [0,1] by the flip map. Fixes
// j/(n+k-1), uniform |slope| scr(n)+scr(n-1).
PLMap lambda_nk(int n, int k);

// Unit-branch counts per grid box: entry [j][l] is the number of injective
// branches with x in the j-th vertical strip whose image is exactly the
// l-th horizontal strip (strips of width 1/(n+k-1)). Every column and row
// sums to scr(n)+scr(n-1).
std::vector<std::vector<long>> box_branch_matrix(const PLMap& lam, int n, int k);

}  // namespace pamap
