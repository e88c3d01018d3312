#include "pamap/window.hpp"

#include <algorithm>

#include "pamap/errors.hpp"

namespace pamap {

WindowPerturbation window_perturbation(const PLMap& f, const Rational& a, const Rational& b,
                                       int m) {
    if (m < 1) throw DomainError("window fold count must be >= 1");
    if (a < f.domain_lo() || b > f.domain_hi() || a >= b)
        throw DomainError("window [a,b] must be a nondegenerate subinterval of the domain");

    PLMap win = restrict_map(f, a, b);
    const Rational w = (b - a) / m;

    std::vector<Node> nodes;
    nodes.reserve(f.node_count() + m * win.node_count());
    for (std::size_t i = 0; i < f.node_count() && f.node_x(i) < a; ++i)
        nodes.push_back({f.node_x(i), f.node_y(i)});

    for (int j = 0; j < m; ++j) {
        const Rational left = a + j * w;
        if (j % 2 == 0) {
            for (std::size_t i = 0; i < win.node_count(); ++i)
                nodes.push_back({left + (win.node_x(i) - a) / m, win.node_y(i)});
        } else {
            for (std::size_t i = win.node_count(); i > 0; --i)
                nodes.push_back({left + (b - win.node_x(i - 1)) / m, win.node_y(i - 1)});
        }
    }

    const Rational end_value = (m % 2 == 1) ? win.node_y(win.node_count() - 1) : win.node_y(0);
    std::optional<Rational> jump;
    if (end_value != f(b)) jump = b;

    for (std::size_t i = 0; i < f.node_count(); ++i)
        if (f.node_x(i) > b) nodes.push_back({f.node_x(i), f.node_y(i)});

    Rational clo = f.codomain_lo(), chi = f.codomain_hi();
    for (const auto& n : nodes) {
        if (n.y < clo) clo = n.y;
        if (n.y > chi) chi = n.y;
    }
    return {PLMap::from_nodes(std::move(nodes), std::move(clo), std::move(chi)), std::move(jump)};
}

}  // namespace pamap
