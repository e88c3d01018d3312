#include "pamap/markov.hpp"

#include <algorithm>
#include <set>

#include "pamap/errors.hpp"

namespace pamap {

bool matrix_primitive(const std::vector<std::vector<int>>& m) {
    const std::size_t n = m.size();
    if (n == 0) return false;
    // Wielandt: a primitive matrix has positive power by (n-1)^2 + 1
    std::size_t bound = (n - 1) * (n - 1) + 1;
    std::vector<std::vector<int>> p = m;
    auto all_positive = [&](const std::vector<std::vector<int>>& a) {
        for (const auto& row : a)
            for (int v : row)
                if (!v) return false;
        return true;
    };
    std::size_t k = 1;
    while (k < bound && !all_positive(p)) {
        std::vector<std::vector<int>> q(n, std::vector<int>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                if (!p[i][l]) continue;
                for (std::size_t j = 0; j < n; ++j)
                    if (m[l][j]) q[i][j] = 1;
            }
        p = std::move(q);
        ++k;
    }
    return all_positive(p);
}

MarkovSystem markov_analysis(const PLMap& f, int orbit_budget) {
    if (f.domain_lo() != 0 || f.domain_hi() != 1)
        throw DomainError("markov_analysis expects a self-map of [0,1]");
    if (!f.maps_into_self()) throw DomainError("map does not send [0,1] into itself");

    MarkovSystem ms;
    ms.min_slope = min_abs_slope(f);

    std::set<Rational> cuts(f.xs().begin(), f.xs().end());
    cuts.insert(rat(0));
    cuts.insert(rat(1));
    // close under the forward map
    std::vector<Rational> frontier(cuts.begin(), cuts.end());
    int added = 0;
    while (!frontier.empty()) {
        std::vector<Rational> next;
        for (const auto& c : frontier) {
            Rational v = f(c);
            if (cuts.insert(v).second) {
                next.push_back(std::move(v));
                if (++added > orbit_budget) {
                    ms.note = "not Markov (budget)";
                    ms.partition.assign(cuts.begin(), cuts.end());
                    return ms;
                }
            }
        }
        frontier = std::move(next);
    }

    ms.partition.assign(cuts.begin(), cuts.end());
    const auto& p = ms.partition;
    const std::size_t ncells = p.size() - 1;
    // nodes are cut points, so f is linear on every cell and cell endpoints
    // map to cut points: the partition is Markov by construction
    ms.is_markov = true;
    ms.transition.assign(ncells, std::vector<int>(ncells, 0));
    for (std::size_t i = 0; i < ncells; ++i) {
        Rational lo = f(p[i]), hi = f(p[i + 1]);
        if (lo > hi) std::swap(lo, hi);
        for (std::size_t j = 0; j < ncells; ++j)
            if (lo <= p[j] && p[j + 1] <= hi) ms.transition[i][j] = 1;
    }
    // primitivity decides leo only for expanding cells (cylinders must
    // shrink for the covering matrix to capture the dynamics)
    ms.is_leo = ms.min_slope > 1 && matrix_primitive(ms.transition);
    return ms;
}

}  // namespace pamap
