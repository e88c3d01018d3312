#include "pamap/family.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "pamap/lambda_maps.hpp"
#include "pamap/markov.hpp"
#include "pamap/parallel.hpp"
#include "pamap/simd.hpp"
#include "pamap/window.hpp"

namespace pamap {

PLMap f_tilde(const Rational& t) {
    if (t < 0 || t > 1) throw DomainError("family parameter t must lie in [0,1]");
    const Rational c = rat(2, 21) * t;  // half-width of the t-driven folds
    std::vector<Node> nodes;
    nodes.push_back({rat(0), t});
    nodes.push_back({c, rat(0)});
    nodes.push_back({2 * c, t});
    nodes.push_back({2 * c + (1 - t) / 7, rat(1)});
    nodes.push_back({rat(2, 7) - c, t});
    nodes.push_back({rat(2, 7), rat(0)});
    nodes.push_back({rat(3, 7), rat(1)});
    nodes.push_back({rat(4, 7), rat(0)});
    nodes.push_back({rat(5, 7), rat(1)});
    nodes.push_back({rat(17, 21), rat(0)});
    nodes.push_back({rat(19, 21), rat(1)});
    nodes.push_back({rat(1), rat(0)});
    return PLMap::from_nodes(std::move(nodes), rat(0), rat(1));
}

PLMap g_tilde(const Rational& t, const std::vector<std::pair<int, int>>& stages,
              std::int64_t piece_budget) {
    PLMap acc = f_tilde(t);
    if (stages.empty()) return acc;
    // g = f o lambda_1 o ... o lambda_m, so lambda_m is innermost
    PLMap inner = lambda_nk(stages.back().first, stages.back().second);
    for (std::size_t i = stages.size() - 1; i-- > 0;) {
        PLMap lam = lambda_nk(stages[i].first, stages[i].second);
        std::int64_t bound = compose_node_bound(lam, inner);
        if (bound > piece_budget)
            throw IterateBudgetError("stage composition exceeds piece budget", std::move(inner),
                                     bound, static_cast<int>(i));
        inner = compose(lam, inner);
    }
    std::int64_t bound = compose_node_bound(acc, inner);
    if (bound > piece_budget)
        throw IterateBudgetError("family composition exceeds piece budget", std::move(inner),
                                 bound, 0);
    return compose(acc, inner);
}

int covering_time(const PLMap& g, const Rational& beta, int cap) {
    if (!(beta > 0 && beta < 1)) throw DomainError("covering_time needs 0 < beta < 1");
    if (g.domain_lo() != 0 || g.domain_hi() != 1 || !g.maps_into_self())
        throw DomainError("covering_time expects a self-map of [0,1]");
    auto hull = g.value_hull();
    if (hull.first != 0 || hull.second != 1)
        throw CoveringBudgetError("map is not onto [0,1]; no interval can ever cover", rat(0),
                                  rat(3) * beta / 4);

    const Rational step = beta / 4;
    const Rational len = 3 * step;
    // candidate count: largest j with j*step + len <= 1
    Rational jmax_q = (1 - len) / step;
    long jmax = static_cast<long>(rat_floor(jmax_q).get_si());
    if (jmax < 0) throw DomainError("beta too large: no candidate intervals");

    ImageOracle img(g);
    struct Worst {
        bool alive = false;
        Rational lo, hi, diam;
        long j = 0;
    };
    int worst_n = 0;
    Worst worst;
    std::mutex mu;
    parallel_chunks(static_cast<std::size_t>(jmax) + 1, 0,
                    [&](std::size_t, std::size_t begin, std::size_t end) {
                        int local_n = 0;
                        Worst local;
                        for (std::size_t j = begin; j < end; ++j) {
                            Rational lo = step * static_cast<long>(j);
                            Rational hi = lo + len;
                            Rational clo = lo, chi = hi;
                            int n = 0;
                            while (n < cap) {
                                auto im = img(clo, chi);
                                clo = std::move(im.first);
                                chi = std::move(im.second);
                                ++n;
                                if (clo == 0 && chi == 1) break;
                            }
                            if (clo == 0 && chi == 1) {
                                if (n > local_n) local_n = n;
                            } else {
                                Rational d = chi - clo;
                                if (!local.alive || d < local.diam ||
                                    (d == local.diam && static_cast<long>(j) < local.j)) {
                                    local = {true, step * static_cast<long>(j),
                                             step * static_cast<long>(j) + len, std::move(d),
                                             static_cast<long>(j)};
                                }
                            }
                        }
                        std::lock_guard<std::mutex> lock(mu);
                        if (local_n > worst_n) worst_n = local_n;
                        if (local.alive &&
                            (!worst.alive || local.diam < worst.diam ||
                             (local.diam == worst.diam && local.j < worst.j)))
                            worst = std::move(local);
                    });
    if (worst.alive)
        throw CoveringBudgetError("covering cap " + std::to_string(cap) +
                                      " reached; surviving interval [" + rat_str(worst.lo) + "," +
                                      rat_str(worst.hi) + "]",
                                  worst.lo, worst.hi);
    return worst_n;
}

bool is_admissible(const PLMap& f, int cap) {
    if (f.domain_lo() != 0 || f.domain_hi() != 1 || !f.maps_into_self()) return false;
    if (has_zero_slope(f) || min_abs_slope(f) < 4) return false;
    try {
        covering_time(f, min_segment_width(f), cap);
        return true;
    } catch (const CoveringBudgetError&) {
        return false;
    }
}

PLMap make_admissible(const PLMap& f, const Rational& epsilon) {
    if (epsilon <= 0) throw DomainError("epsilon must be positive");
    MarkovSystem ms = markov_analysis(f);
    if (!ms.is_markov) throw DomainError("make_admissible requires a Markov map");
    if (!ms.is_leo) throw DomainError("make_admissible requires a leo map");
    if (!is_measure_preserving(f).verdict)
        throw DomainError("make_admissible requires a measure-preserving map");

    // Refine by cut-point preimages (stays Markov) until every cell image is
    // shorter than epsilon. A refined cell maps onto an old cell, so each
    // round caps image diameters by the previous mesh.
    std::vector<Rational> part = ms.partition;
    for (int round = 0; round < 64; ++round) {
        Rational worst = 0;
        for (std::size_t i = 0; i + 1 < part.size(); ++i) {
            auto [lo, hi] = image_of_interval(f, part[i], part[i + 1]);
            if (hi - lo > worst) worst = hi - lo;
        }
        if (worst < epsilon) break;
        if (round == 63 || part.size() > 200000)
            throw BudgetError("make_admissible: partition refinement did not converge");
        std::vector<Rational> next = part;
        for (const auto& p : part) {
            auto pre = preimages(f, p);
            next.insert(next.end(), pre.begin(), pre.end());
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        part = std::move(next);
    }

    PLMap out = f;
    for (std::size_t i = 0; i + 1 < part.size(); ++i) {
        const Rational &a = part[i], &b = part[i + 1];
        Rational s = rat_abs((f(b) - f(a)) / (b - a));  // cells are linear
        if (s >= 4) continue;
        int m = 1;
        while (m * s < 4) m += 2;
        out = window_perturbation(out, a, b, m).map;
    }
    Rational moved = sup_distance(out, f);
    if (!(moved < epsilon))
        throw InvariantViolation("make_admissible moved the map by " + rat_str(moved));
    return out;
}

Rational eval_iterate(const PLMap& f, int N, const Rational& x) {
    Rational v = x;
    for (int i = 0; i < N; ++i) v = f(v);
    return v;
}

namespace {

std::size_t locate_flat(const PLFlat& f, double x) {
    std::size_t lo = 0, hi = f.xs.size();
    while (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (f.xs[mid] <= x)
            lo = mid;
        else
            hi = mid;
    }
    if (lo + 1 >= f.xs.size()) lo = f.xs.size() - 2;
    return lo;
}

void sampled_iterate_polyline(const PLFlat& flat, int N, std::size_t samples,
                              std::vector<double>& xs, std::vector<double>& ys) {
    xs.resize(samples);
    ys.resize(samples);
    for (std::size_t i = 0; i < samples; ++i)
        xs[i] = static_cast<double>(i) / static_cast<double>(samples - 1);
    std::vector<double> cur = xs, tmp(samples);
    const auto& k = simd::kernels();
    for (int s = 0; s < N; ++s) {
        k.pl_eval(flat, cur.data(), tmp.data(), samples);
        cur.swap(tmp);
    }
    ys = std::move(cur);
}

// Follow the float orbit's branch chain through the exact map and solve the
// linear pieces backwards: yields an exact x with f^N(x) = target when the
// chain is consistent.
std::optional<Rational> refine_preimage(const PLMap& F, const PLFlat& flat, int N, double x0,
                                        const Rational& target) {
    if (N <= 0) return std::nullopt;
    std::vector<std::size_t> segs(static_cast<std::size_t>(N));
    double p = x0;
    for (int j = 0; j < N; ++j) {
        p = p < flat.lo ? flat.lo : (p > flat.hi ? flat.hi : p);
        std::size_t s = locate_flat(flat, p);
        segs[static_cast<std::size_t>(j)] = s;
        p = flat.ys[s] + (p - flat.xs[s]) * flat.slopes[s];
    }
    Rational v = target;
    const long seg_count = static_cast<long>(F.segment_count());
    for (int j = N - 1; j >= 0; --j) {
        bool done = false;
        for (long off : {0L, -1L, 1L, -2L, 2L}) {
            long s = static_cast<long>(segs[static_cast<std::size_t>(j)]) + off;
            if (s < 0 || s >= seg_count) continue;
            auto si = static_cast<std::size_t>(s);
            const Rational &y0 = F.node_y(si), &y1 = F.node_y(si + 1);
            Rational lo = rat_min(y0, y1), hi = rat_max(y0, y1);
            if (v < lo || v > hi) continue;
            Rational x = F.node_x(si) + (v - y0) / F.slope(si);
            if (x < F.node_x(si) || x > F.node_x(si + 1)) continue;
            v = std::move(x);
            done = true;
            break;
        }
        if (!done) return std::nullopt;
    }
    return v;
}

Rational dyadic_snap(double x, int bits = 44) {
    double scaled = std::ldexp(x, bits);
    double rounded = std::nearbyint(scaled);
    BigInt num;
    mpz_set_d(num.get_mpz_t(), rounded);
    BigInt den = 1;
    den <<= static_cast<unsigned>(bits);
    Rational q = rat(num, den);
    if (q < 0) q = 0;
    if (q > 1) q = 1;
    return q;
}

struct CandidateOutcome {
    bool ok = false;
    std::string why;
    std::vector<PLMap> Fs;
    std::vector<CrookifyReport> reports;
    int N = 0;
    // data for the best-so-far bookkeeping on failure
    bool reached_crookedness = false;
};

// Runs every gate for one (n,k) against all targets; first failure rejects.
CandidateOutcome try_candidate(const std::vector<const PLMap*>& fs,
                               const std::vector<bool>& preserves, int n, int k,
                               const Rational& eta, const Rational& delta,
                               const CrookifyBudgets& budgets) {
    CandidateOutcome out;
    PLMap lam = lambda_nk(n, k);
    const Rational gamma = rat(1, n + k - 1);

    // cheap lower bound on rho(F, f) from a node subset
    std::size_t stride = std::max<std::size_t>(1, lam.node_count() / 128);
    for (std::size_t ti = 0; ti < fs.size(); ++ti) {
        const PLMap& f = *fs[ti];
        for (std::size_t i = 0; i < lam.node_count(); i += stride) {
            Rational dev = rat_abs(f(lam.node_y(i)) - f(lam.node_x(i)));
            if (!(dev < eta)) {
                out.why = "eta prescreen";
                return out;
            }
        }
    }

    std::vector<PLMap> Fs;
    std::vector<CrookifyReport> reps(fs.size());
    for (std::size_t ti = 0; ti < fs.size(); ++ti) {
        const PLMap& f = *fs[ti];
        if (compose_node_bound(f, lam) > budgets.piece_budget) {
            out.why = "piece budget at composition";
            return out;
        }
        PLMap F = compose(f, lam);
        Rational rho = sup_distance(F, f);
        if (!(rho < eta)) {
            out.why = "rho >= eta";
            return out;
        }
        reps[ti].n = n;
        reps[ti].k = k;
        reps[ti].eta = eta;
        reps[ti].delta = delta;
        reps[ti].rho = std::move(rho);
        if (preserves[ti]) {
            reps[ti].measure_ok = is_measure_preserving(F).verdict;
            if (!reps[ti].measure_ok) {
                out.why = "measure certificate failed";
                return out;
            }
        }
        Fs.push_back(std::move(F));
    }

    int N = 0;
    for (std::size_t ti = 0; ti < Fs.size(); ++ti) {
        try {
            N = std::max(N, covering_time(Fs[ti], gamma, budgets.covering_cap));
        } catch (const CoveringBudgetError&) {
            out.why = "covering cap";
            return out;
        }
    }
    out.reached_crookedness = true;

    // exact level grid delta/divisions, shared by both check modes
    std::vector<Rational> levels_exact;
    const Rational step = delta / budgets.value_grid_divisions;
    for (Rational v = 0; v <= 1; v += step) levels_exact.push_back(v);
    if (levels_exact.back() != 1) levels_exact.push_back(rat(1));

    for (std::size_t ti = 0; ti < Fs.size(); ++ti) {
        const PLMap& F = Fs[ti];
        CrookifyReport& rep = reps[ti];
        rep.N = N;
        bool exact_mode = false;
        try {
            PLMap Fn = iterate(F, N, budgets.piece_budget);
            exact_mode = true;
            rep.crook = crookedness_grid_check(Fn, delta, step, budgets.threads);
            if (!rep.crook.verdict) {
                out.why = "crookedness grid failed (exact)";
                return out;
            }
            if (rep.crook.worst_pair) {
                rep.witness_a = rep.crook.worst_pair->a;
                rep.witness_b = rep.crook.worst_pair->b;
                auto dec = is_crooked_between(Fn, rep.witness_a, rep.witness_b, delta);
                rep.exact_witness = dec.tightest_witness;
                rep.witness_verified = dec.crooked;
            } else {
                rep.witness_verified = true;
                rep.notes += "exact grid had no nontrivial pair; ";
            }
        } catch (const IterateBudgetError&) {
            // sampled lane
        }
        if (!exact_mode) {
            PLFlat flat = flatten(F);
            std::vector<double> xs, ys;
            sampled_iterate_polyline(flat, N, budgets.screen_samples, xs, ys);
            std::vector<double> levels_f;
            levels_f.reserve(levels_exact.size());
            for (const auto& lv : levels_exact) levels_f.push_back(to_double(lv));
            auto sg = polyline_grid_check(xs, ys, to_double(delta), levels_f, budgets.threads);
            rep.crook.delta = delta;
            rep.crook.mode = CrookedMode::sampled;
            rep.crook.grid_step = step;
            rep.crook.verdict = sg.verdict;
            if (!sg.verdict) {
                if (sg.violation) {
                    auto find_level = [&](double v) -> Rational {
                        for (std::size_t i = 0; i < levels_f.size(); ++i)
                            if (levels_f[i] == v) return levels_exact[i];
                        return dyadic_snap(v);
                    };
                    rep.crook.worst_pair =
                        WorstPair{find_level((*sg.violation)[0]), find_level((*sg.violation)[1]),
                                  dyadic_snap((*sg.violation)[2]), dyadic_snap((*sg.violation)[3])};
                }
                out.why = "crookedness grid failed (sampled)";
                out.reports = std::move(reps);
                out.Fs = std::move(Fs);
                out.N = N;
                return out;
            }
            if (sg.tightest) {
                auto find_level = [&](double v) -> std::optional<Rational> {
                    for (std::size_t i = 0; i < levels_f.size(); ++i)
                        if (levels_f[i] == v) return levels_exact[i];
                    return std::nullopt;
                };
                auto la = find_level(sg.tightest->a);
                auto lb = find_level(sg.tightest->b);
                if (la && lb) {
                    rep.witness_a = *la;
                    rep.witness_b = *lb;
                    rep.crook.worst_pair = WorstPair{*la, *lb, dyadic_snap(sg.tightest->c),
                                                     dyadic_snap(sg.tightest->d)};
                    auto c_exact = refine_preimage(F, flat, N, sg.tightest->c, *la);
                    auto d_exact = refine_preimage(F, flat, N, sg.tightest->d, *lb);
                    Rational cp = dyadic_snap(sg.tightest->c_prime);
                    Rational dp = dyadic_snap(sg.tightest->d_prime);
                    bool ok = c_exact.has_value() && d_exact.has_value();
                    if (ok) {
                        ok = eval_iterate(F, N, *c_exact) == *la &&
                             eval_iterate(F, N, *d_exact) == *lb;
                        ok = ok && rat_abs(eval_iterate(F, N, cp) - *lb) < delta;
                        ok = ok && rat_abs(eval_iterate(F, N, dp) - *la) < delta;
                        if (ok) {
                            bool fwd = *c_exact < *d_exact;
                            ok = fwd ? (*c_exact < cp && cp < dp && dp < *d_exact)
                                     : (*d_exact < dp && dp < cp && cp < *c_exact);
                        }
                    }
                    if (ok) {
                        rep.exact_witness = CrookedWitness{*c_exact, *d_exact, cp, dp};
                        rep.crook.worst_pair->c = *c_exact;
                        rep.crook.worst_pair->d = *d_exact;
                    }
                    rep.witness_verified = ok;
                } else {
                    rep.witness_verified = false;
                    rep.notes += "sampled witness level not on the exact grid; ";
                }
            } else {
                rep.witness_verified = true;
                rep.notes += "sampled grid had no nontrivial pair; ";
            }
        }
        if (!rep.witness_verified) {
            out.why = "witness re-verification failed";
            out.reports = std::move(reps);
            out.Fs = std::move(Fs);
            out.N = N;
            return out;
        }
    }

    out.ok = true;
    out.N = N;
    out.Fs = std::move(Fs);
    out.reports = std::move(reps);
    return out;
}

// (k, n) lexicographic candidate stream under the eta constraint
std::vector<std::pair<int, int>> candidate_list(const Rational& eta, const CrookifyBudgets& b) {
    std::vector<std::pair<int, int>> out;
    for (int k = 1; static_cast<int>(out.size()) < b.max_candidates && k <= 4000000; ++k) {
        for (int n = 7; n <= b.n_max && static_cast<int>(out.size()) < b.max_candidates; n += 2) {
            if (rat(n + 1, 2 * (n + k - 1)) < eta) out.emplace_back(k, n);
        }
    }
    return out;
}

}  // namespace

CrookifyResult crookify_step(const PLMap& f, const Rational& eta, const Rational& delta,
                             const CrookifyBudgets& budgets) {
    if (eta <= 0 || delta <= 0) throw DomainError("eta and delta must be positive");
    if (f.domain_lo() != 0 || f.domain_hi() != 1 || !f.maps_into_self())
        throw DomainError("crookify_step expects a self-map of [0,1]");
    if (min_abs_slope(f) < 4)
        throw DomainError("crookify_step requires an admissible input (|slope| >= 4)");

    std::vector<const PLMap*> fs{&f};
    std::vector<bool> preserves{is_measure_preserving(f).verdict};

    std::optional<CrookifyResult> best;
    auto cands = candidate_list(eta, budgets);
    int tried = 0;
    for (auto [k, n] : cands) {
        ++tried;
        auto res = try_candidate(fs, preserves, n, k, eta, delta, budgets);
        if (res.ok) {
            CrookifyResult out{std::move(res.Fs[0]), std::move(res.reports[0])};
            out.report.candidates_tried = tried;
            return out;
        }
        if (res.reached_crookedness && !res.Fs.empty()) {
            CrookifyResult cand{std::move(res.Fs[0]), std::move(res.reports[0])};
            cand.report.candidates_tried = tried;
            cand.report.notes += "failed: " + res.why;
            best = std::move(cand);
        }
    }
    throw CrookifyBudgetError("crookify_step: no candidate passed within " +
                                  std::to_string(tried) + " candidates",
                              std::move(best));
}

std::string serialize_schedule(const PerturbationSchedule& s) {
    std::ostringstream os;
    for (const auto& st : s.stages)
        os << "stage " << st.n << ' ' << st.k << ' ' << rat_str(st.eta) << ' '
           << rat_str(st.delta) << ' ' << st.N << '\n';
    return os.str();
}

PerturbationSchedule parse_schedule(const std::string& text) {
    PerturbationSchedule s;
    std::istringstream is(text);
    std::string tag;
    while (is >> tag) {
        if (tag != "stage") throw ParseError("schedule: expected 'stage'");
        ScheduleStage st;
        std::string eta, delta;
        if (!(is >> st.n >> st.k >> eta >> delta >> st.N)) throw ParseError("truncated stage line");
        st.eta = parse_rational(eta);
        st.delta = parse_rational(delta);
        s.stages.push_back(std::move(st));
    }
    return s;
}

PerturbationSchedule crookify_family(const std::vector<Rational>& ts, const Rational& eta_total,
                                     const std::vector<Rational>& delta_seq,
                                     const CrookifyBudgets& budgets) {
    if (ts.empty()) throw DomainError("crookify_family needs at least one parameter sample");
    if (delta_seq.empty()) throw DomainError("crookify_family needs at least one stage target");
    if (eta_total <= 0) throw DomainError("eta_total must be positive");

    PerturbationSchedule sched;
    sched.ts = ts;
    std::vector<PLMap> gs;
    gs.reserve(ts.size());
    for (const auto& t : ts) gs.push_back(f_tilde(t));
    std::vector<bool> preserves(ts.size(), true);

    Rational eta_s = eta_total;
    for (std::size_t stage = 0; stage < delta_seq.size(); ++stage) {
        eta_s = eta_s / 2;  // eta_total/2, /4, ... keeps the sum under eta_total
        const Rational& delta_s = delta_seq[stage];
        std::vector<const PLMap*> fs;
        for (const auto& g : gs) fs.push_back(&g);

        bool found = false;
        auto cands = candidate_list(eta_s, budgets);
        int tried = 0;
        for (auto [k, n] : cands) {
            ++tried;
            auto res = try_candidate(fs, preserves, n, k, eta_s, delta_s, budgets);
            if (!res.ok) continue;
            sched.stages.push_back(ScheduleStage{n, k, res.N, eta_s, delta_s});
            for (auto& r : res.reports) r.candidates_tried = tried;
            sched.final_reports = std::move(res.reports);
            gs = std::move(res.Fs);
            found = true;
            break;
        }
        if (!found)
            throw CrookifyBudgetError("crookify_family: stage " + std::to_string(stage + 1) +
                                          " found no candidate within " + std::to_string(tried),
                                      std::nullopt);
    }
    return sched;
}

}  // namespace pamap
