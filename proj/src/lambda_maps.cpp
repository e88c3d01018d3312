#include "pamap/lambda_maps.hpp"

#include "pamap/errors.hpp"
#include "pamap/sigma.hpp"

namespace pamap {

namespace {

void require_valid_nk(int n, int k) {
    if (n < 7 || n % 2 == 0) throw DomainError("lambda maps need odd n >= 7");
    if (k < 1) throw DomainError("lambda maps need k >= 1");
}

}  // namespace

Rational lambda_eta(int n) {
    return rat(BigInt(scr(n - 1)), BigInt(2 * (scr(n) + scr(n - 1))));
}

PLMap lambda_hat(int n, int k) {
    require_valid_nk(n, k);
    const Rational eta = lambda_eta(n);
    const Rational two_eta = 2 * eta;
    const Rational mid_width = 1 - two_eta;
    const Rational collar_scale = rat(n - 1, n);
    const PLMap right = sigma_right_half(-(n - 1));
    const PLMap middle = sigma(n);
    const PLMap left = sigma_left_half(-(n - 1));
    const Rational half = rat(1, 2);

    std::vector<Node> nodes;
    nodes.reserve((n + k - 1) * (right.node_count() + middle.node_count() + left.node_count()));
    for (int i = 0; i <= n + k - 2; ++i) {
        const Rational base = rat(i), shift = rat(i, n);
        for (std::size_t j = 0; j < right.node_count(); ++j)
            nodes.push_back({base + two_eta * (right.node_x(j) - half),
                             collar_scale * right.node_y(j) + shift});
        for (std::size_t j = 0; j < middle.node_count(); ++j)
            nodes.push_back({base + eta + mid_width * middle.node_x(j), middle.node_y(j) + shift});
        const Rational shift1 = rat(i + 1, n);
        for (std::size_t j = 0; j < left.node_count(); ++j)
            nodes.push_back({base + 1 + two_eta * (left.node_x(j) - half),
                             collar_scale * left.node_y(j) + shift1});
    }
    return PLMap::from_nodes(std::move(nodes), rat(0), rat(2 * n + k - 2, n));
}

PLMap lambda_nk(int n, int k) {
    require_valid_nk(n, k);
    const PLMap hat = lambda_hat(n, k);
    const int nk1 = n + k - 1;
    const Rational scale = rat(n, nk1);
    const Rational drop = rat(n - 1, 2 * nk1);

    // s-values before the flip; pieces are strip-aligned, so no piece
    // crosses the fold lines s=0 or s=1 strictly inside
    std::vector<Rational> ss;
    ss.reserve(hat.node_count());
    for (std::size_t i = 0; i < hat.node_count(); ++i)
        ss.push_back(scale * hat.node_y(i) - drop);
    for (std::size_t i = 0; i + 1 < ss.size(); ++i) {
        const Rational &s0 = ss[i], &s1 = ss[i + 1];
        Rational lo = rat_min(s0, s1), hi = rat_max(s0, s1);
        if ((lo < 0 && hi > 0) || (lo < 1 && hi > 1))
            throw InvariantViolation("lambda piece crosses a fold line");
    }

    std::vector<Node> nodes;
    nodes.reserve(ss.size());
    for (std::size_t i = 0; i < ss.size(); ++i) {
        Rational y = ss[i] <= 0 ? Rational(-ss[i]) : (ss[i] >= 1 ? Rational(2 - ss[i]) : ss[i]);
        nodes.push_back({hat.node_x(i) / nk1, std::move(y)});
    }
    return PLMap::from_nodes(std::move(nodes), rat(0), rat(1));
}

std::vector<std::vector<long>> box_branch_matrix(const PLMap& lam, int n, int k) {
    require_valid_nk(n, k);
    const int nk1 = n + k - 1;
    const Rational gamma = rat(1, nk1);
    std::vector<std::vector<long>> box(nk1, std::vector<long>(nk1, 0));

    for (std::size_t i = 0; i < lam.segment_count(); ++i) {
        const Rational &x0 = lam.node_x(i), &y0 = lam.node_y(i), &y1 = lam.node_y(i + 1);
        const Rational& s = lam.slope(i);
        Rational lo = rat_min(y0, y1), hi = rat_max(y0, y1);
        Rational dq = (hi - lo) / gamma;
        if (dq.get_den() != 1)
            throw InvariantViolation("piece image not aligned to the strip grid");
        long d = dq.get_num().get_si();
        Rational lq = lo / gamma;
        if (lq.get_den() != 1) throw InvariantViolation("piece image offset from the strip grid");
        long l0 = lq.get_num().get_si();
        for (long u = 0; u < d; ++u) {
            Rational va = lo + u * gamma, vb = va + gamma;
            Rational xa = x0 + (va - y0) / s, xb = x0 + (vb - y0) / s;
            Rational mid = (xa + xb) / 2;
            long j = rat_floor(mid * nk1).get_si();
            if (j < 0 || j >= nk1 || l0 + u >= nk1)
                throw InvariantViolation("unit branch outside the box grid");
            ++box[j][l0 + u];
        }
    }
    return box;
}

}  // namespace pamap
