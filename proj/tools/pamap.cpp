// pamap: construction, verification and rendering tools for exact
// piecewise-linear interval maps and their band attractors.

#include <CLI11.hpp>
#include <chrono>
#include <iostream>

#include "pamap/bbm.hpp"
#include "pamap/crooked.hpp"
#include "pamap/empirical.hpp"
#include "pamap/family.hpp"
#include "pamap/invlim.hpp"
#include "pamap/lambda_maps.hpp"
#include "pamap/markov.hpp"
#include "pamap/measure.hpp"
#include "pamap/report.hpp"
#include "pamap/sigma.hpp"
#include "pamap/simd.hpp"

using namespace pamap;

namespace {

constexpr const char* kToolId = "pamap 1.0";

struct Global {
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    std::int64_t piece_budget = 5000000;
    std::string out_dir = ".";
    std::string report_path;
};

std::string out_path(const Global& g, const std::string& name) {
    if (name.empty()) return name;
    if (name.front() == '/') return name;
    return g.out_dir + "/" + name;
}

void finish_report(const Global& g, RunReport& rep, int argc, char** argv) {
    std::string echo;
    for (int i = 0; i < argc; ++i) {
        if (i) echo += ' ';
        echo += argv[i];
    }
    RunReport full;
    full.kv("tool", kToolId);
    full.kv("command", echo);
    full.kv("kernels", simd::kernels().name);
    std::string body = rep.text();
    std::string head = full.text();
    if (!g.report_path.empty())
        write_file(out_path(g, g.report_path), head + body);
    else
        std::cout << head + body;
}

Rational opt_rat(const std::string& s) { return parse_rational(s); }

std::vector<Rational> parse_rat_list(const std::string& csv) {
    std::vector<Rational> out;
    std::string cur;
    for (char c : csv + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(parse_rational(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

std::vector<std::pair<int, int>> parse_stage_list(const std::vector<std::string>& stages) {
    std::vector<std::pair<int, int>> out;
    for (const auto& s : stages) {
        auto comma = s.find(',');
        if (comma == std::string::npos) throw ParseError("stage must be n,k");
        out.emplace_back(std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1)));
    }
    return out;
}

void report_crookify(RunReport& rep, const CrookifyReport& r, const std::string& prefix) {
    rep.kv(prefix + "n", r.n);
    rep.kv(prefix + "k", r.k);
    rep.kv(prefix + "N", r.N);
    rep.kv(prefix + "rho", r.rho);
    rep.kv(prefix + "eta", r.eta);
    rep.kv(prefix + "delta", r.delta);
    rep.kv(prefix + "measure_ok", r.measure_ok);
    rep.kv(prefix + "crook_mode", to_string(r.crook.mode));
    rep.kv(prefix + "crook_verdict", r.crook.verdict);
    if (r.crook.worst_pair) {
        rep.kv(prefix + "worst_a", r.crook.worst_pair->a);
        rep.kv(prefix + "worst_b", r.crook.worst_pair->b);
        rep.kv(prefix + "worst_c", r.crook.worst_pair->c);
        rep.kv(prefix + "worst_d", r.crook.worst_pair->d);
    }
    rep.kv(prefix + "witness_verified", r.witness_verified);
    if (r.exact_witness) {
        rep.kv(prefix + "witness_c", r.exact_witness->c);
        rep.kv(prefix + "witness_d", r.exact_witness->d);
        rep.kv(prefix + "witness_c_prime", r.exact_witness->c_prime);
        rep.kv(prefix + "witness_d_prime", r.exact_witness->d_prime);
    }
    rep.kv(prefix + "candidates_tried", r.candidates_tried);
    if (!r.notes.empty()) rep.kv(prefix + "notes", r.notes);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact piecewise-linear interval map workbench"};
    app.require_subcommand(1);
    Global g;
    app.add_option("--seed", g.seed, "seed for randomized operations")
        ->each([&](const std::string&) { g.seed_set = true; });
    app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
    app.add_option("--piece-budget", g.piece_budget, "piece budget for exact compositions");
    app.add_option("--out-dir", g.out_dir, "directory for output artifacts");
    app.add_option("--report", g.report_path, "write the run report to this path");

    RunReport rep;
    int exit_code = 0;

    // ---- sigma ----
    auto* c_sigma = app.add_subcommand("sigma", "emit a simple n-crooked map");
    int sigma_n = 0;
    std::string sigma_out, sigma_delta, sigma_step = "1/210";
    c_sigma->add_option("--n", sigma_n, "index (nonzero; negative reflects)")->required();
    c_sigma->add_option("--out", sigma_out, "plmap output path");
    c_sigma->add_option("--check-delta", sigma_delta, "run the crookedness grid check");
    c_sigma->add_option("--step", sigma_step, "grid step for the check");
    c_sigma->callback([&] {
        PLMap s = sigma(sigma_n);
        rep.kv("sigma_n", static_cast<long>(sigma_n));
        rep.kv("pieces", s.segment_count());
        rep.kv("scr", rat_str(rat(scr(std::abs(sigma_n)), BigInt(1))));
        if (!sigma_out.empty()) {
            write_file(out_path(g, sigma_out), serialize_plmap(s));
            rep.kv("map_path", out_path(g, sigma_out));
        }
        if (!sigma_delta.empty()) {
            auto r = crookedness_grid_check(s, opt_rat(sigma_delta), opt_rat(sigma_step),
                                            g.threads);
            rep.kv("check_delta", r.delta);
            rep.kv("check_step", *r.grid_step);
            rep.kv("check_mode", to_string(r.mode));
            rep.kv("check_verdict", r.verdict);
            if (!r.verdict) {
                rep.kv("worst_a", r.worst_pair->a);
                rep.kv("worst_b", r.worst_pair->b);
                exit_code = 2;
            }
        }
    });

    // ---- lambda ----
    auto* c_lambda = app.add_subcommand("lambda", "emit a lambda_{n,k} perturbation map");
    int lam_n = 0, lam_k = 0, lam_trials = 100;
    bool lam_verify = false;
    std::string lam_out;
    c_lambda->add_option("--n", lam_n, "odd n >= 7")->required();
    c_lambda->add_option("--k", lam_k, "k >= 1")->required();
    c_lambda->add_flag("--verify", lam_verify, "measure certificate + perturbation lemma suite");
    c_lambda->add_option("--trials", lam_trials, "random intervals for the lemma suite");
    c_lambda->add_option("--out", lam_out, "plmap output path");
    c_lambda->callback([&] {
        PLMap lam = lambda_nk(lam_n, lam_k);
        rep.kv("lambda_n", static_cast<long>(lam_n));
        rep.kv("lambda_k", static_cast<long>(lam_k));
        rep.kv("pieces", lam.segment_count());
        rep.kv("slope", max_abs_slope(lam));
        if (!lam_out.empty()) {
            write_file(out_path(g, lam_out), serialize_plmap(lam));
            rep.kv("map_path", out_path(g, lam_out));
        }
        if (lam_verify) {
            if (!g.seed_set) throw CLI::ValidationError("--verify needs --seed");
            auto cert = is_measure_preserving(lam);
            rep.kv("measure_verdict", cert.verdict);
            rep.kv("measure_gaps", cert.witnesses.size());
            auto mr = verify_minc_updt(lam_n, lam_k, lam_trials, g.seed, g.threads);
            rep.kv("lemma_rho_id", mr.rho_id);
            rep.kv("lemma_rho_bound", mr.rho_bound);
            rep.kv("lemma_i", mr.part_i);
            rep.kv("lemma_ii", mr.part_ii);
            rep.kv("lemma_iii_diam", mr.part_iii_diam);
            rep.kv("lemma_iii_a", mr.part_iii_a);
            rep.kv("lemma_iii_b", mr.part_iii_b);
            rep.kv("lemma_iii_c", mr.part_iii_c);
            rep.kv("lemma_maxima_spacing", mr.maxima_spacing);
            if (!mr.all_ok()) {
                rep.kv("lemma_failure", mr.failure_detail);
                exit_code = 2;
            }
            if (!cert.verdict) exit_code = 2;
        }
    });

    // ---- family ----
    auto* c_family = app.add_subcommand("family", "emit f~_t or a staged composition");
    std::string fam_t, fam_out;
    std::vector<std::string> fam_stages;
    bool fam_check = false;
    c_family->add_option("--t", fam_t, "parameter in [0,1]")->required();
    c_family->add_option("--stage", fam_stages, "composed lambda stage n,k (innermost last)");
    c_family->add_option("--out", fam_out, "plmap output path");
    c_family->add_flag("--check", fam_check, "measure certificate, slopes and anchor values");
    c_family->callback([&] {
        Rational t = opt_rat(fam_t);
        PLMap gmap = g_tilde(t, parse_stage_list(fam_stages), g.piece_budget);
        rep.kv("t", t);
        rep.kv("stages", fam_stages.size());
        rep.kv("pieces", gmap.segment_count());
        rep.kv("value_at_0", gmap(rat(0)));
        rep.kv("value_at_1", gmap(rat(1)));
        if (!fam_out.empty()) {
            write_file(out_path(g, fam_out), serialize_plmap(gmap));
            rep.kv("map_path", out_path(g, fam_out));
        }
        if (fam_check) {
            auto cert = is_measure_preserving(gmap);
            rep.kv("measure_verdict", cert.verdict);
            rep.kv("min_slope", min_abs_slope(gmap));
            rep.kv("max_slope", max_abs_slope(gmap));
            rep.kv("anchor_2_7", gmap(rat(2, 7)));
            rep.kv("anchor_3_7", gmap(rat(3, 7)));
            if (!cert.verdict) exit_code = 2;
        }
    });

    // ---- crookify ----
    auto* c_crookify = app.add_subcommand("crookify", "compose-and-certify pipeline");
    std::string cr_t, cr_map, cr_eta = "1/10", cr_delta = "1/4", cr_out, cr_sched_out, cr_ts,
                cr_deltas;
    CrookifyBudgets budgets;
    c_crookify->add_option("--t", cr_t, "start from f~_t");
    c_crookify->add_option("--map", cr_map, "start from a plmap file");
    c_crookify->add_option("--eta", cr_eta, "uniform-distance budget");
    c_crookify->add_option("--delta", cr_delta, "crookedness target for the iterate");
    c_crookify->add_option("--out", cr_out, "plmap output for the perturbed map");
    c_crookify->add_option("--schedule-out", cr_sched_out, "schedule output (family mode)");
    c_crookify->add_option("--family-ts", cr_ts, "comma-separated t samples (family mode)");
    c_crookify->add_option("--family-deltas", cr_deltas, "per-stage deltas (family mode)");
    c_crookify->add_option("--max-candidates", budgets.max_candidates, "candidate budget");
    c_crookify->add_option("--covering-cap", budgets.covering_cap, "covering iteration cap");
    c_crookify->add_option("--screen-samples", budgets.screen_samples, "sampled-mode x grid");
    c_crookify->add_option("--grid-divisions", budgets.value_grid_divisions,
                           "value grid step = delta/divisions");
    c_crookify->callback([&] {
        budgets.piece_budget = g.piece_budget;
        budgets.threads = g.threads;
        if (!cr_ts.empty()) {
            auto ts = parse_rat_list(cr_ts);
            auto deltas = cr_deltas.empty() ? std::vector<Rational>{opt_rat(cr_delta)}
                                            : parse_rat_list(cr_deltas);
            auto sched = crookify_family(ts, opt_rat(cr_eta), deltas, budgets);
            std::string body = serialize_schedule(sched);
            if (!cr_sched_out.empty()) {
                write_file(out_path(g, cr_sched_out), body);
                rep.kv("schedule_path", out_path(g, cr_sched_out));
            }
            rep.kv("stage_count", sched.stages.size());
            for (std::size_t i = 0; i < sched.ts.size(); ++i)
                report_crookify(rep, sched.final_reports[i],
                                "t" + std::to_string(i) + "_");
        } else {
            PLMap f = cr_map.empty() ? f_tilde(opt_rat(cr_t)) : parse_plmap(read_file(cr_map));
            auto res = crookify_step(f, opt_rat(cr_eta), opt_rat(cr_delta), budgets);
            if (!cr_out.empty()) {
                write_file(out_path(g, cr_out), serialize_plmap(res.F));
                rep.kv("map_path", out_path(g, cr_out));
            }
            rep.kv("pieces", res.F.segment_count());
            report_crookify(rep, res.report, "");
        }
    });

    // ---- attractor ----
    auto* c_attr = app.add_subcommand("attractor", "band-map attractor cloud and raster");
    std::string at_map, at_delta = "1/8", at_out, at_cloud;
    int at_burn = 512, at_kept = 128, at_seeds = 64, at_w = 1024, at_h = 512;
    bool at_edge = false;
    c_attr->add_option("--map", at_map, "plmap input")->required();
    c_attr->add_option("--delta", at_delta, "band contraction parameter");
    c_attr->add_option("--burn-in", at_burn, "discarded iterations per seed");
    c_attr->add_option("--kept", at_kept, "kept tail snapshots per seed");
    c_attr->add_option("--seeds", at_seeds, "number of starting points");
    c_attr->add_option("--out", at_out, "PGM raster output");
    c_attr->add_option("--cloud", at_cloud, "point table output");
    c_attr->add_option("--width", at_w, "raster width");
    c_attr->add_option("--height", at_h, "raster height");
    c_attr->add_flag("--edge-check", at_edge, "exact edge-dynamics certificate");
    c_attr->callback([&] {
        if (!g.seed_set) throw CLI::ValidationError("attractor needs --seed");
        PLMap f = parse_plmap(read_file(at_map));
        Rational delta = opt_rat(at_delta);
        auto cloud = attractor_cloud(f, delta, at_burn, at_kept, at_seeds, g.seed);
        rep.kv("points", cloud.xs.size());
        if (!at_out.empty()) {
            write_file(out_path(g, at_out), raster_to_pgm(attractor_raster(cloud, at_w, at_h)));
            rep.kv("raster_path", out_path(g, at_out));
        }
        if (!at_cloud.empty()) {
            EmpiricalMeasure em;
            em.dim = 2;
            em.map_hash = cloud.map_hash;
            em.seed = cloud.seed;
            em.points.reserve(cloud.xs.size() * 2);
            for (std::size_t i = 0; i < cloud.xs.size(); ++i) {
                em.points.push_back(cloud.xs[i]);
                em.points.push_back(cloud.ys[i]);
            }
            write_file(out_path(g, at_cloud), serialize_measure_table(em));
            rep.kv("cloud_path", out_path(g, at_cloud));
        }
        if (at_edge) {
            auto cert = edge_dynamics_check(f, delta);
            const char* kind = cert.kind == EdgeDynamics::fixed_edge      ? "fixed_edge"
                               : cert.kind == EdgeDynamics::swapped_edges ? "swapped_edges"
                                                                          : "neither";
            rep.kv("edge_dynamics", kind);
            if (cert.fixed_y) rep.kv("edge_fixed_y", *cert.fixed_y);
            if (cert.period2_y) {
                rep.kv("edge_period2_y0", cert.period2_y->first);
                rep.kv("edge_period2_y1", cert.period2_y->second);
            }
        }
    });

    // ---- invlim ----
    auto* c_inv = app.add_subcommand("invlim", "inverse-limit sampling and statistics");
    c_inv->require_subcommand(1);
    auto* c_sample = c_inv->add_subcommand("sample", "sample the induced measure");
    std::string is_map, is_out;
    int is_depth = 20, is_proj = 0;
    std::size_t is_count = 100000;
    c_sample->add_option("--map", is_map, "plmap input")->required();
    c_sample->add_option("--depth", is_depth, "backward depth");
    c_sample->add_option("--count", is_count, "orbit count");
    c_sample->add_option("--proj", is_proj, "projected coordinates (default depth+1 capped at 8)");
    c_sample->add_option("--out", is_out, "measure table output");
    c_sample->callback([&] {
        if (!g.seed_set) throw CLI::ValidationError("invlim sample needs --seed");
        PLMap f = parse_plmap(read_file(is_map));
        auto cert = is_measure_preserving(f);
        if (!cert.verdict) throw DomainError("map is not measure-preserving");
        int m = is_proj > 0 ? is_proj : std::min(is_depth + 1, 8);
        auto em = sample_mu_hat(f, cert, is_depth, m, is_count, g.seed, g.threads);
        rep.kv("count", em.count());
        rep.kv("dim", static_cast<long>(em.dim));
        std::vector<double> first(em.count());
        for (std::size_t i = 0; i < em.count(); ++i) first[i] = em.coord(i, 0);
        rep.kv("ks_first_marginal", ks_uniform_statistic(std::move(first)));
        if (!is_out.empty()) {
            write_file(out_path(g, is_out), serialize_measure_table(em));
            rep.kv("table_path", out_path(g, is_out));
        }
    });

    auto* c_birk = c_inv->add_subcommand("birkhoff", "time average along a forward orbit");
    std::string bk_map, bk_fn = "id", bk_x0 = "0.1234";
    long bk_steps = 1000000;
    c_birk->add_option("--map", bk_map, "plmap input")->required();
    c_birk->add_option("--x0", bk_x0, "starting point (decimal)");
    c_birk->add_option("--steps", bk_steps, "orbit length");
    c_birk->add_option("--fn", bk_fn, "id | square | ind:a,b");
    c_birk->callback([&] {
        PLMap f = parse_plmap(read_file(bk_map));
        TestFn fn = TestFn::id;
        double ia = 0, ib = 1;
        if (bk_fn == "square")
            fn = TestFn::square;
        else if (bk_fn.rfind("ind:", 0) == 0) {
            fn = TestFn::indicator;
            auto rest = bk_fn.substr(4);
            auto comma = rest.find(',');
            ia = to_double(parse_rational(rest.substr(0, comma)));
            ib = to_double(parse_rational(rest.substr(comma + 1)));
        }
        auto res = birkhoff_average(f, std::stod(bk_x0), bk_steps, fn, ia, ib);
        rep.kv("average", res.average);
        rep.kv("target", res.target);
        rep.kv("steps", res.steps);
        rep.kv("status", "diagnostic");
    });

    auto* c_prok = c_inv->add_subcommand("prokhorov", "distance between two measure tables");
    std::string pk_a, pk_b;
    c_prok->add_option("--a", pk_a, "first table")->required();
    c_prok->add_option("--b", pk_b, "second table")->required();
    c_prok->callback([&] {
        auto A = parse_measure_table(read_file(pk_a));
        auto B = parse_measure_table(read_file(pk_b));
        rep.kv("prokhorov", prokhorov_distance(A, B));
    });

    // ---- crooked ----
    auto* c_crook = app.add_subcommand("crooked", "crookedness checks");
    c_crook->require_subcommand(1);
    auto* cc_check = c_crook->add_subcommand("check", "grid check");
    std::string ck_map, ck_delta, ck_step = "1/210";
    cc_check->add_option("--map", ck_map, "plmap input")->required();
    cc_check->add_option("--delta", ck_delta, "band half-width")->required();
    cc_check->add_option("--step", ck_step, "value grid step");
    cc_check->callback([&] {
        PLMap f = parse_plmap(read_file(ck_map));
        auto r = crookedness_grid_check(f, opt_rat(ck_delta), opt_rat(ck_step), g.threads);
        rep.kv("delta", r.delta);
        rep.kv("mode", to_string(r.mode));
        rep.kv("verdict", r.verdict);
        if (r.worst_pair) {
            rep.kv("pair_a", r.worst_pair->a);
            rep.kv("pair_b", r.worst_pair->b);
            rep.kv("pair_c", r.worst_pair->c);
            rep.kv("pair_d", r.worst_pair->d);
        }
        if (!r.verdict) exit_code = 2;
    });
    auto* cc_between = c_crook->add_subcommand("between", "exact single-pair decision");
    std::string cb_map, cb_a, cb_b, cb_delta;
    cc_between->add_option("--map", cb_map)->required();
    cc_between->add_option("--a", cb_a)->required();
    cc_between->add_option("--b", cb_b)->required();
    cc_between->add_option("--delta", cb_delta)->required();
    cc_between->callback([&] {
        PLMap f = parse_plmap(read_file(cb_map));
        auto d = is_crooked_between(f, opt_rat(cb_a), opt_rat(cb_b), opt_rat(cb_delta));
        rep.kv("crooked", d.crooked);
        if (d.violating_cd) {
            rep.kv("violating_c", d.violating_cd->first);
            rep.kv("violating_d", d.violating_cd->second);
        }
        if (d.tightest_witness) {
            rep.kv("witness_c", d.tightest_witness->c);
            rep.kv("witness_d", d.tightest_witness->d);
            rep.kv("witness_c_prime", d.tightest_witness->c_prime);
            rep.kv("witness_d_prime", d.tightest_witness->d_prime);
        }
        if (!d.crooked) exit_code = 2;
    });
    auto* cc_est = c_crook->add_subcommand("estimate", "defect estimate (lattice search)");
    std::string ce_map;
    int ce_samples = 64;
    cc_est->add_option("--map", ce_map)->required();
    cc_est->add_option("--samples", ce_samples);
    cc_est->callback([&] {
        if (!g.seed_set) throw CLI::ValidationError("crooked estimate needs --seed");
        PLMap f = parse_plmap(read_file(ce_map));
        rep.kv("defect_estimate",
               crookedness_defect_estimate(f, ce_samples, g.seed, 10, g.threads));
    });

    // ---- verify ----
    auto* c_verify = app.add_subcommand("verify", "standalone certificates");
    c_verify->require_subcommand(1);
    auto* cv_measure = c_verify->add_subcommand("measure", "Lebesgue preservation certificate");
    std::string vm_map;
    cv_measure->add_option("--map", vm_map)->required();
    cv_measure->callback([&] {
        PLMap f = parse_plmap(read_file(vm_map));
        auto cert = is_measure_preserving(f);
        rep.kv("verdict", cert.verdict);
        rep.kv("gaps", cert.witnesses.size());
        if (cert.failing_value) rep.kv("failing_value", *cert.failing_value);
        if (!cert.verdict) exit_code = 2;
    });
    auto* cv_minc = c_verify->add_subcommand("minc", "lambda perturbation lemma suite");
    int vmi_n = 7, vmi_k = 1, vmi_trials = 500;
    cv_minc->add_option("--n", vmi_n)->required();
    cv_minc->add_option("--k", vmi_k)->required();
    cv_minc->add_option("--trials", vmi_trials);
    cv_minc->callback([&] {
        if (!g.seed_set) throw CLI::ValidationError("verify minc needs --seed");
        auto mr = verify_minc_updt(vmi_n, vmi_k, vmi_trials, g.seed, g.threads);
        rep.kv("rho_id", mr.rho_id);
        rep.kv("rho_bound", mr.rho_bound);
        rep.kv("part_i", mr.part_i);
        rep.kv("part_ii", mr.part_ii);
        rep.kv("part_iii_diam", mr.part_iii_diam);
        rep.kv("part_iii_a", mr.part_iii_a);
        rep.kv("part_iii_b", mr.part_iii_b);
        rep.kv("part_iii_c", mr.part_iii_c);
        rep.kv("maxima_spacing", mr.maxima_spacing);
        if (!mr.all_ok()) {
            rep.kv("failure", mr.failure_detail);
            exit_code = 2;
        }
    });
    auto* cv_adm = c_verify->add_subcommand("admissible", "slope + covering certificate");
    std::string va_map;
    cv_adm->add_option("--map", va_map)->required();
    cv_adm->callback([&] {
        PLMap f = parse_plmap(read_file(va_map));
        bool ok = is_admissible(f);
        rep.kv("admissible", ok);
        rep.kv("min_slope", min_abs_slope(f));
        if (!ok) exit_code = 2;
    });
    auto* cv_markov = c_verify->add_subcommand("markov", "Markov closure and leo matrix");
    std::string vk_map;
    cv_markov->add_option("--map", vk_map)->required();
    cv_markov->callback([&] {
        PLMap f = parse_plmap(read_file(vk_map));
        auto ms = markov_analysis(f);
        rep.kv("is_markov", ms.is_markov);
        rep.kv("is_leo", ms.is_leo);
        rep.kv("cells", ms.partition.size() - 1);
        rep.kv("min_slope", ms.min_slope);
        if (!ms.note.empty()) rep.kv("note", ms.note);
    });
    auto* cv_rot = c_verify->add_subcommand("rotation", "boundary rotation estimate");
    std::string vr_map, vr_delta = "1/8";
    int vr_iters = 64, vr_samples = 4096;
    cv_rot->add_option("--map", vr_map)->required();
    cv_rot->add_option("--delta", vr_delta);
    cv_rot->add_option("--iters", vr_iters);
    cv_rot->add_option("--samples", vr_samples);
    cv_rot->callback([&] {
        PLMap f = parse_plmap(read_file(vr_map));
        auto est = estimate_boundary_rotation(f, opt_rat(vr_delta), vr_iters, vr_samples);
        rep.kv("rotation_turns", est.turns);
        rep.kv("status", est.status);
    });

    auto started = std::chrono::steady_clock::now();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const BudgetError& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - started)
                  .count();
    rep.kv("elapsed_ms", static_cast<long>(ms));
    finish_report(g, rep, argc, argv);
    return exit_code;
}
