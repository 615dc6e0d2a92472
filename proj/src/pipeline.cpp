#include "fibaux/pipeline.hpp"
#include "fibaux/parser.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fibaux {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

GridSpec default_screen_grid(Variant v) {
    GridSpec g;
    if (v == Variant::EtaForm) {
        g = {1.0, 3.0, 21, -0.9, -0.1, 21};
    } else {
        g = {0.1, 1.5, 21, 0.25, 2.25, 21};
    }
    return g;
}

} // namespace

CaseConfig case_from_config(const RunConfig& rc) {
    if (!rc.case_path.empty()) {
        CaseConfig c = load_case(rc.case_path);
        if (c.screen_grid.nx < 2) c.screen_grid = default_screen_grid(c.family_id.variant);
        return c;
    }
    if (rc.pde_text.empty() || rc.transform_text.empty())
        throw Error("E_CONFIG", "provide either --case or both --pde and --transform");
    CaseConfig c;
    c.label = "inline";
    c.pde = parse_pde(rc.pde_text);
    c.transform = parse_transform(rc.transform_text,
                                  rc.variant == Variant::EtaForm ? "eta" : "zeta");
    c.family_id.family = rc.family;
    c.family_id.variant = rc.variant;
    c.reciprocal = rc.reciprocal;
    c.n_lo = rc.n_lo;
    c.n_hi = rc.n_hi;
    c.screen_grid = rc.have_grid ? rc.grid : default_screen_grid(rc.variant);
    return c;
}

Expr compose_branch_solution(const CaseConfig& cfg, const SolutionBranch& branch, long n,
                             SolveMode mode) {
    FamilyId id = cfg.family_id.with_n(n);
    Expr z = general_aux_solution(id, mode, make_sym("C1"), make_sym("C2"));
    std::vector<Expr> terms;
    std::vector<int> powers = {0};
    std::vector<std::string> coeffs = {"g0"};
    if (cfg.reciprocal) {
        powers.push_back(-1);
        coeffs.push_back("gm1");
    } else {
        powers.push_back(1);
        coeffs.push_back("g1");
    }
    for (size_t i = 0; i < powers.size(); ++i) {
        auto it = branch.assignments.find(coeffs[i]);
        Expr coeff = it != branch.assignments.end() ? ratfunc_to_expr(it->second)
                                                    : make_sym(coeffs[i]);
        terms.push_back(coeff * make_pow(z, make_num(powers[i])));
    }
    Expr U = make_add(terms);
    std::map<std::string, Expr> binds;
    binds[cfg.transform.xi] = cfg.transform.definition;
    binds["n"] = make_num(n);
    return substitute(U, binds);
}

IndexDecision screen_index(const CaseConfig& cfg, const OdeSpec& ode, long n,
                           SolveMode mode) {
    IndexDecision d;
    d.n = n;
    if (n < -1 || n > 1) {
        d.reason = "outside the strict reading of the index rule (n in {-1,0,1})";
        return d;
    }
    if (n == 0) {
        d.reason = "constant ansatz (n = 0) carries no wave part";
        return d;
    }
    if (cfg.reciprocal && n > 0) {
        d.reason = "declared reciprocal ansatz needs a negative index";
        return d;
    }
    if (!cfg.reciprocal && n < 0) {
        d.reason = "declared direct ansatz needs a positive index";
        return d;
    }
    AnsatzSpec ansatz =
        make_ansatz(1, cfg.reciprocal, aux_for_mode(cfg.family_id.with_n(n), mode));
    AlgebraicSystem sys;
    try {
        sys = substitute_and_collect(ode, ansatz, mode);
    } catch (const Error& e) {
        d.reason = std::string("collection failed: ") + e.what();
        return d;
    }
    std::vector<SolutionBranch> branches;
    if (!sys.equations.empty()) branches = solve_system(sys, mode);
    const SolutionBranch* chosen = nullptr;
    for (const auto& b : branches) {
        auto it = b.assignments.find(ansatz.top_coeff());
        bool top_zero = it != b.assignments.end() && it->second.is_zero();
        if (!top_zero) { chosen = &b; break; }
    }
    if (!chosen) {
        d.reason = "no consistent branch keeps the top coefficient nonzero";
        return d;
    }
    // evaluate the composed reference solution on the screen window
    Expr u = compose_branch_solution(cfg, *chosen, n, mode);
    EvalPoint base = cfg.screen_params;
    for (const auto& s : free_symbols(u))
        if (s != "x" && s != "t" && !base.count(s)) base[s] = 1.0;
    const GridSpec& g = cfg.screen_grid;
    long in = 0, total = static_cast<long>(g.nx) * g.nt;
    double maxu = 0;
    for (int it = 0; it < g.nt; ++it)
        for (int ix = 0; ix < g.nx; ++ix) {
            EvalPoint p = base;
            p["x"] = g.x0 + (g.x1 - g.x0) * ix / (g.nx - 1);
            p["t"] = g.t0 + (g.t1 - g.t0) * it / (g.nt - 1);
            EvalResult r = eval_expr(u, p);
            if (!r.ok) continue;
            in++;
            maxu = std::max(maxu, std::abs(r.value));
        }
    if (in * 10 < total) {
        d.reason = "reference window mostly out of domain";
        return d;
    }
    if (maxu > 1e3) {
        d.reason = "composed solution unbounded on the reference window (max |u| = " +
                   fmt17(maxu) + ")";
        return d;
    }
    d.accepted = true;
    d.reason = "accepted";
    return d;
}

CaseRun run_case(const CaseConfig& cfg, SolveMode mode, unsigned seed) {
    CaseRun run;
    run.cfg = cfg;
    run.ode = reduce_pde(cfg.pde, cfg.transform);

    run.balanced_N = balance(run.ode, cfg.family_id);

    auto order = admissible_indices(std::max(run.ode.order, 1), cfg.n_lo, cfg.n_hi);
    for (long n : order) {
        IndexDecision d = screen_index(cfg, run.ode, n, mode);
        if (d.accepted && !run.has_selected) {
            run.has_selected = true;
            run.selected_n = n;
        }
        run.decisions.push_back(std::move(d));
    }

    // branch artifacts with the index symbolic
    AnsatzSpec ansatz =
        make_ansatz(run.balanced_N, cfg.reciprocal, aux_for_mode(cfg.family_id, mode));
    run.system = substitute_and_collect(run.ode, ansatz, mode);
    run.branches = solve_system(run.system, mode, seed);

    for (const auto& [sym, pin] : cfg.printed_branch) {
        bool match = false, free_in_ours = false;
        for (const auto& b : run.branches) {
            auto it = b.assignments.find(sym);
            if (it == b.assignments.end()) {
                free_in_ours = true;
                continue;
            }
            if (it->second == pin) match = true;
        }
        run.comparisons[sym] =
            match ? "match" : (free_in_ours ? "free-in-ours" : "mismatch");
    }

    if (run.has_selected) {
        const SolutionBranch* chosen = nullptr;
        AnsatzSpec concrete = make_ansatz(
            run.balanced_N, cfg.reciprocal,
            aux_for_mode(cfg.family_id.with_n(run.selected_n), mode));
        AlgebraicSystem csys = substitute_and_collect(run.ode, concrete, mode);
        auto cbranches = solve_system(csys, mode, seed);
        for (const auto& b : cbranches) {
            auto it = b.assignments.find(concrete.top_coeff());
            bool top_zero = it != b.assignments.end() && it->second.is_zero();
            if (!top_zero) { chosen = &b; break; }
        }
        if (!chosen && !cbranches.empty()) chosen = &cbranches.front();
        if (chosen) {
            Expr u = compose_branch_solution(cfg, *chosen, run.selected_n, mode);
            std::map<std::string, Expr> binds;
            EvalPoint params;
            for (const auto& s : free_symbols(u)) {
                if (s == "x" || s == "t") continue;
                auto it = cfg.screen_params.find(s);
                params[s] = it != cfg.screen_params.end() ? it->second : 1.0;
            }
            run.reference_report =
                pde_residual_grid(cfg.pde, u, cfg.screen_grid, params, true);
            run.reference_report.case_label = cfg.label;
            run.reference_report.solution_id =
                "branch candidate at n = " + std::to_string(run.selected_n);
            run.have_report = true;
        }
    }
    return run;
}

std::string run_report_json(const CaseRun& run) {
    nlohmann::ordered_json j;
    j["case"] = run.cfg.label;
    j["ode_order"] = run.ode.order;
    j["balanced_N"] = run.balanced_N;
    j["selected_n"] = run.has_selected ? nlohmann::ordered_json(run.selected_n)
                                       : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json dec = nlohmann::ordered_json::array();
    for (const auto& d : run.decisions)
        dec.push_back({{"n", d.n}, {"accepted", d.accepted}, {"reason", d.reason}});
    j["index_decisions"] = dec;
    j["branch_count"] = run.branches.size();
    nlohmann::ordered_json cmp = nlohmann::ordered_json::object();
    for (const auto& [k, v] : run.comparisons) cmp[k] = v;
    j["printed_coefficient_comparison"] = cmp;
    if (!run.cfg.comparison_note.empty()) j["comparison_note"] = run.cfg.comparison_note;
    if (run.have_report)
        j["reference_residual"] = nlohmann::ordered_json::parse(
            report_to_json(run.reference_report));
    return j.dump(2);
}

double emit_grid(const Expr& solution, const GridSpec& grid,
                 const std::map<std::string, Expr>& params, std::ostream& os) {
    if (grid.nx < 2 || grid.nt < 2)
        throw Error("E_GRID", "grid resolution must be at least 2 per axis");
    Expr bound = substitute(solution, params);
    for (const auto& s : free_symbols(bound))
        if (s != "x" && s != "t" && s != "pi")
            throw Error("E_PARAMS", "unbound parameter in grid emission: " + s);
    os << "x,t,u,in_domain\n";
    long in = 0;
    for (int it = 0; it < grid.nt; ++it) {
        double t = grid.t0 + (grid.t1 - grid.t0) * it / (grid.nt - 1);
        for (int ix = 0; ix < grid.nx; ++ix) {
            double x = grid.x0 + (grid.x1 - grid.x0) * ix / (grid.nx - 1);
            EvalResult r = eval_expr(bound, {{"x", x}, {"t", t}});
            os << fmt17(x) << "," << fmt17(t) << ",";
            if (r.ok) {
                os << fmt17(r.value) << ",1\n";
                in++;
            } else {
                os << ",0\n";
            }
        }
    }
    if (in == 0) throw Error("E_EMPTY_GRID", "grid entirely out of domain");
    return static_cast<double>(in) / (static_cast<double>(grid.nx) * grid.nt);
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p);
    if (!out) throw Error("E_IO", "cannot write " + p.string());
    out << content;
}

} // namespace

int run_pipeline(const RunConfig& rc) {
    CaseConfig cfg = case_from_config(rc);
    if (rc.have_range) { cfg.n_lo = rc.n_lo; cfg.n_hi = rc.n_hi; }
    if (rc.have_grid) cfg.screen_grid = rc.grid;
    CaseRun run = run_case(cfg, rc.mode, rc.seed);

    std::filesystem::create_directories(rc.out_dir);
    std::filesystem::path dir(rc.out_dir);
    write_file(dir / (cfg.label + "_branches.json"),
               branches_to_json(cfg.label, rc.mode, run.system, run.branches));
    write_file(dir / (cfg.label + "_report.json"), run_report_json(run));
    if (run.have_report)
        write_file(dir / (cfg.label + "_grid.csv"), report_samples_csv(run.reference_report));

    bool ok = run.has_selected && !run.branches.empty();
    return ok ? 0 : 3;
}

int run_plot_data(const RunConfig& rc) {
    CaseConfig cfg = case_from_config(rc);
    if (cfg.figures.empty())
        throw Error("E_CONFIG", "case file declares no figure windows");
    std::filesystem::create_directories(rc.out_dir);
    std::filesystem::path dir(rc.out_dir);
    for (const auto& fig : cfg.figures) {
        const Expr& sol = cfg.printed.at(fig.solution);
        std::ostringstream csv;
        double coverage = emit_grid(sol, fig.grid, fig.params, csv);
        write_file(dir / (cfg.label + "_" + fig.id + ".csv"), csv.str());

        Expr bound = substitute(sol, fig.params);
        ResidualReport rep = pde_residual_grid(cfg.pde, bound, fig.grid, {}, false);
        rep.case_label = cfg.label;
        rep.solution_id = fig.id + " (" + fig.solution + ")";
        nlohmann::ordered_json j = nlohmann::ordered_json::parse(report_to_json(rep));
        j["in_domain_fraction"] = fmt17(coverage);
        write_file(dir / (cfg.label + "_" + fig.id + "_report.json"), j.dump(2));
    }
    return 0;
}

} // namespace fibaux
