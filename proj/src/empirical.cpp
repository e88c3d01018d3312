#include "pamap/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <sstream>

#include "pamap/errors.hpp"

namespace pamap {

std::string serialize_measure_table(const EmpiricalMeasure& m) {
    std::ostringstream os;
    os << "# measure-table v1\n";
    os << "# dim " << m.dim << "\n";
    os << "# count " << m.count() << "\n";
    os << "# map " << m.map_hash << "\n";
    os << "# depth " << m.depth << "\n";
    os << "# seed " << m.seed << "\n";
    char buf[64];
    for (std::size_t i = 0; i < m.count(); ++i) {
        for (int j = 0; j < m.dim; ++j) {
            std::snprintf(buf, sizeof buf, "%.16e", m.coord(i, j));
            os << (j ? " " : "") << buf;
        }
        os << "\n";
    }
    return os.str();
}

EmpiricalMeasure parse_measure_table(const std::string& text) {
    EmpiricalMeasure m;
    std::istringstream is(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string key;
            hs >> key;
            if (key == "measure-table")
                header_seen = true;
            else if (key == "dim")
                hs >> m.dim;
            else if (key == "map")
                hs >> m.map_hash;
            else if (key == "depth")
                hs >> m.depth;
            else if (key == "seed")
                hs >> m.seed;
            continue;
        }
        std::istringstream ps(line);
        double v;
        while (ps >> v) m.points.push_back(v);
    }
    if (!header_seen) throw ParseError("not a measure-table document");
    if (m.dim < 1 || m.points.size() % static_cast<std::size_t>(m.dim) != 0)
        throw ParseError("measure table shape mismatch");
    return m;
}

namespace {

// Hopcroft-Karp maximum matching on an adjacency list
class MaxMatching {
   public:
    MaxMatching(std::size_t nl, std::size_t nr) : nl_(nl), nr_(nr), adj_(nl) {}
    void add_edge(std::size_t l, std::size_t r) { adj_[l].push_back(r); }

    std::size_t solve() {
        match_l_.assign(nl_, npos);
        match_r_.assign(nr_, npos);
        std::size_t matched = 0;
        while (bfs()) {
            for (std::size_t u = 0; u < nl_; ++u)
                if (match_l_[u] == npos && dfs(u)) ++matched;
        }
        return matched;
    }

   private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    static constexpr int inf = 1 << 30;

    bool bfs() {
        std::queue<std::size_t> q;
        dist_.assign(nl_, inf);
        for (std::size_t u = 0; u < nl_; ++u)
            if (match_l_[u] == npos) {
                dist_[u] = 0;
                q.push(u);
            }
        bool found = false;
        while (!q.empty()) {
            std::size_t u = q.front();
            q.pop();
            for (std::size_t v : adj_[u]) {
                std::size_t w = match_r_[v];
                if (w == npos)
                    found = true;
                else if (dist_[w] == inf) {
                    dist_[w] = dist_[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    }

    bool dfs(std::size_t u) {
        for (std::size_t v : adj_[u]) {
            std::size_t w = match_r_[v];
            if (w == npos || (dist_[w] == dist_[u] + 1 && dfs(w))) {
                match_l_[u] = v;
                match_r_[v] = u;
                return true;
            }
        }
        dist_[u] = inf;
        return false;
    }

    std::size_t nl_, nr_;
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::size_t> match_l_, match_r_;
    std::vector<int> dist_;
};

}  // namespace

double prokhorov_distance(const EmpiricalMeasure& P, const EmpiricalMeasure& Q) {
    if (P.count() != Q.count()) throw DomainError("prokhorov_distance needs equal counts");
    if (P.dim != Q.dim) throw DomainError("dimension mismatch");
    const std::size_t n = P.count();
    if (n == 0) return 0.0;

    std::vector<double> dist(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0;
            for (int d = 0; d < P.dim; ++d) {
                double t = P.coord(i, d) - Q.coord(j, d);
                s += t * t;
            }
            dist[i * n + j] = std::sqrt(s);
        }

    std::vector<double> cand(dist);
    for (std::size_t k = 0; k <= n; ++k)
        cand.push_back(static_cast<double>(k) / static_cast<double>(n));
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    auto feasible = [&](double eps) {
        MaxMatching mm(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (dist[i * n + j] <= eps) mm.add_edge(i, j);
        double need = static_cast<double>(n) * (1.0 - eps) - 1e-9;
        return static_cast<double>(mm.solve()) >= need;
    };

    std::size_t lo = 0, hi = cand.size() - 1;
    if (feasible(cand[lo])) return cand[lo];
    if (!feasible(cand[hi])) return 1.0;  // eps = 1 always works for [0,1]-type data
    while (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (feasible(cand[mid]))
            hi = mid;
        else
            lo = mid;
    }
    return cand[hi];
}

double ks_uniform_statistic(std::vector<double> values) {
    if (values.empty()) throw DomainError("empty sample");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double v = values[i];
        d = std::max(d, (static_cast<double>(i) + 1) / n - v);
        d = std::max(d, v - static_cast<double>(i) / n);
    }
    return d;
}

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DomainError("empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        double fa = static_cast<double>(i) / static_cast<double>(a.size());
        double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::fabs(fa - fb));
    }
    double ne = static_cast<double>(a.size()) * static_cast<double>(b.size()) /
                static_cast<double>(a.size() + b.size());
    double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    double p = 0;
    for (int k = 1; k <= 100; ++k)
        p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace pamap
