#include "pamap/sigma.hpp"

#include <map>
#include <mutex>

#include "pamap/errors.hpp"

namespace pamap {

BigInt scr(int n) {
    if (n < 1) throw DomainError("scr defined for n >= 1");
    BigInt a = 1, b = 2;  // scr[1], scr[2]
    if (n == 1) return a;
    for (int i = 3; i <= n; ++i) {
        BigInt c = 2 * b + a;
        a = std::move(b);
        b = std::move(c);
    }
    return b;
}

PLMap phi(const PLMap& g1, const PLMap& g2, const Rational& s, int m) {
    for (const PLMap* g : {&g1, &g2}) {
        if (g->domain_lo() != 0 || g->domain_hi() != 1 || (*g)(rat(0)) != 0 || (*g)(rat(1)) != 1)
            throw DomainError("phi requires maps of [0,1] fixing 0 and 1");
    }
    if (!(s > 0 && 2 * s < 1)) throw DomainError("phi requires 0 < s < 1/2");
    if (m < 3) throw DomainError("phi requires m >= 3");

    const Rational m1 = rat(m - 1, m), m2 = rat(m - 2, m), off = rat(1, m);
    std::vector<Node> nodes;
    nodes.reserve(2 * g2.node_count() + g1.node_count());
    // [0,s]: (m-1)/m * g2(t/s)
    for (std::size_t i = 0; i < g2.node_count(); ++i)
        nodes.push_back({s * g2.node_x(i), m1 * g2.node_y(i)});
    // [s,1-s]: 1/m + (m-2)/m * g1((1-s-t)/(1-2s)), i.e. g1 traversed backwards
    for (std::size_t i = g1.node_count(); i > 0; --i) {
        const Rational& u = g1.node_x(i - 1);
        nodes.push_back({1 - s - u * (1 - 2 * s), off + m2 * g1.node_y(i - 1)});
    }
    // [1-s,1]: 1/m + (m-1)/m * g2((t+s-1)/s)
    for (std::size_t i = 0; i < g2.node_count(); ++i)
        nodes.push_back({1 - s + s * g2.node_x(i), off + m1 * g2.node_y(i)});
    return PLMap::from_nodes(std::move(nodes), rat(0), rat(1));
}

namespace {

std::map<int, PLMap> g_sigma_cache;
std::mutex g_sigma_mutex;

PLMap sigma_positive(int n) {
    if (n <= 2) return PLMap::identity();
    PLMap g1 = sigma(n - 2);
    PLMap g2 = sigma(n - 1);
    Rational sn = rat(scr(n - 1), scr(n));
    return phi(g1, g2, sn, n);
}

}  // namespace

PLMap sigma(int n) {
    if (n == 0) throw DomainError("sigma is defined for nonzero n");
    int key = n;
    {
        std::lock_guard<std::mutex> lock(g_sigma_mutex);
        auto it = g_sigma_cache.find(key);
        if (it != g_sigma_cache.end()) return it->second;
    }
    PLMap result = n > 0 ? sigma_positive(n) : postcompose_affine(sigma(-n), rat(-1), rat(1));
    std::lock_guard<std::mutex> lock(g_sigma_mutex);
    auto [it, inserted] = g_sigma_cache.emplace(key, std::move(result));
    return it->second;
}

PLMap sigma_left_half(int n) { return restrict_map(sigma(n), rat(0), rat(1, 2)); }

PLMap sigma_right_half(int n) { return restrict_map(sigma(n), rat(1, 2), rat(1)); }

}  // namespace pamap
