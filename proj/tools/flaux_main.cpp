#include "fibaux/parser.hpp"
#include "fibaux/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace fibaux;

namespace {

GridSpec parse_grid_flag(const std::string& text) {
    // "x=a:b:k,t=c:d:k"
    GridSpec g;
    bool have_x = false, have_t = false;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        size_t eq = part.find('=');
        if (eq == std::string::npos) throw Error("E_CONFIG", "bad --grid spec: " + text);
        std::string axis = part.substr(0, eq);
        std::string rest = part.substr(eq + 1);
        double a, b;
        int k;
        if (std::sscanf(rest.c_str(), "%lf:%lf:%d", &a, &b, &k) != 3)
            throw Error("E_CONFIG", "bad --grid range: " + part);
        if (axis == "x") { g.x0 = a; g.x1 = b; g.nx = k; have_x = true; }
        else if (axis == "t") { g.t0 = a; g.t1 = b; g.nt = k; have_t = true; }
        else throw Error("E_CONFIG", "unknown grid axis: " + axis);
    }
    if (!have_x || !have_t) throw Error("E_CONFIG", "--grid needs both x and t ranges");
    return g;
}

void parse_range_flag(const std::string& text, long& lo, long& hi) {
    size_t dots = text.find("..");
    if (dots == std::string::npos) throw Error("E_CONFIG", "bad --n-range, want a..b");
    lo = std::stol(text.substr(0, dots));
    hi = std::stol(text.substr(dots + 2));
}

void add_common(CLI::App* cmd, RunConfig& rc, std::string& grid_text, std::string& range_text,
                std::string& family, std::string& variant, std::string& mode,
                std::string& ansatz) {
    cmd->add_option("--case", rc.case_path, "case file (JSON)");
    cmd->add_option("--pde", rc.pde_text, "inline PDE, e.g. \"u_t - (u^2)_xx - p*u + q*u^3 = 0\"");
    cmd->add_option("--transform", rc.transform_text, "inline similarity variable, e.g. \"eta=t/x^2\"");
    cmd->add_option("--family", family, "fibonacci|lucas (inline runs)");
    cmd->add_option("--variant", variant, "eta|zeta (inline runs)");
    cmd->add_option("--ansatz", ansatz, "direct|reciprocal (inline runs)");
    cmd->add_option("--mode", mode, "strict|paper (default paper)");
    cmd->add_option("--n-range", range_text, "candidate indices a..b");
    cmd->add_option("--grid", grid_text, "evaluation grid x=a:b:k,t=c:d:k");
    cmd->add_option("--out", rc.out_dir, "output directory");
    cmd->add_option("--seed", rc.seed, "seed for the numeric fallback");
}

RunConfig finish_config(RunConfig rc, const std::string& grid_text,
                        const std::string& range_text, const std::string& family,
                        const std::string& variant, const std::string& mode,
                        const std::string& ansatz) {
    if (!rc.case_path.empty() && !rc.pde_text.empty())
        throw Error("E_CONFIG", "provide either --case or --pde, not both");
    if (!family.empty())
        rc.family = family == "lucas" || family == "L" ? Family::Lucas : Family::Fibonacci;
    if (!variant.empty())
        rc.variant = variant == "zeta" ? Variant::ZetaForm : Variant::EtaForm;
    if (!ansatz.empty()) rc.reciprocal = ansatz == "reciprocal";
    if (!mode.empty()) {
        if (mode != "strict" && mode != "paper")
            throw Error("E_CONFIG", "--mode must be strict or paper");
        rc.mode = mode == "strict" ? SolveMode::Strict : SolveMode::Paper;
    }
    if (!range_text.empty()) {
        parse_range_flag(range_text, rc.n_lo, rc.n_hi);
        rc.have_range = true;
    }
    if (!grid_text.empty()) {
        rc.grid = parse_grid_flag(grid_text);
        rc.have_grid = true;
    }
    if (const char* env = std::getenv("FLAUX_OUT"); env && *env) rc.out_dir = env;
    return rc;
}

int cmd_table(const std::string& family, const std::string& variant, long n_max) {
    Family f = family == "lucas" || family == "L" ? Family::Lucas : Family::Fibonacci;
    Variant v = variant == "zeta" ? Variant::ZetaForm : Variant::EtaForm;
    long n0 = f == Family::Lucas ? 0 : 1;
    std::cout << "n\tpolynomial\n";
    for (long n = n0; n <= n_max; ++n)
        std::cout << n << "\t" << one_var_poly(f, v, n).str() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const char* env = std::getenv("FLAUX_THREADS"); env && *env)
        omp_set_num_threads(std::atoi(env));
#endif
    CLI::App app{"auxiliary-equation solver for similarity-reduced heat conduction"};
    app.require_subcommand(1);

    RunConfig rc;
    std::string grid_text, range_text, family, variant, mode, ansatz;

    auto* table = app.add_subcommand("table", "print the polynomial families as TSV");
    std::string tfam = "fibonacci", tvar = "eta";
    long tmax = 12;
    table->add_option("--family", tfam, "fibonacci|lucas (F|L)");
    table->add_option("--variant", tvar, "eta|zeta");
    table->add_option("--n-max", tmax, "largest index");

    auto* reduce = app.add_subcommand("reduce", "similarity-reduce the PDE and print the ODE");
    auto* balance_cmd = app.add_subcommand("balance", "report the series truncation N");
    auto* solve = app.add_subcommand("solve", "solve the coefficient system, write branches.json");
    auto* verify = app.add_subcommand("verify", "residual report for the selected branch");
    auto* plot = app.add_subcommand("plot-data", "emit figure CSV grids and residual reports");
    auto* pipe = app.add_subcommand("pipeline", "full run: reduce, balance, solve, verify");
    for (CLI::App* c : {reduce, balance_cmd, solve, verify, plot, pipe})
        add_common(c, rc, grid_text, range_text, family, variant, mode, ansatz);

    CLI11_PARSE(app, argc, argv);

    try {
        if (table->parsed()) return cmd_table(tfam, tvar, tmax);
        RunConfig cfg = finish_config(rc, grid_text, range_text, family, variant, mode, ansatz);

        if (reduce->parsed()) {
            CaseConfig c = case_from_config(cfg);
            OdeSpec ode = reduce_pde(c.pde, c.transform);
            std::cout << "variable: " << ode.variable << "\norder: " << ode.order
                      << "\nlhs: " << ode.lhs.str() << "\nsexpr: " << to_sexpr(ode.lhs) << "\n";
            return 0;
        }
        if (balance_cmd->parsed()) {
            CaseConfig c = case_from_config(cfg);
            OdeSpec ode = reduce_pde(c.pde, c.transform);
            std::cout << "N = " << balance(ode, c.family_id) << "\n";
            return 0;
        }
        if (solve->parsed()) {
            CaseConfig c = case_from_config(cfg);
            OdeSpec ode = reduce_pde(c.pde, c.transform);
            AnsatzSpec an = make_ansatz(balance(ode, c.family_id), c.reciprocal,
                                        aux_for_mode(c.family_id, cfg.mode));
            AlgebraicSystem sys = substitute_and_collect(ode, an, cfg.mode);
            auto branches = solve_system(sys, cfg.mode, cfg.seed);
            std::filesystem::create_directories(cfg.out_dir);
            std::filesystem::path out = std::filesystem::path(cfg.out_dir) /
                                        (c.label + "_branches.json");
            std::ofstream f(out);
            f << branches_to_json(c.label, cfg.mode, sys, branches);
            std::cout << branches.size() << " branches -> " << out.string() << "\n";
            return 0;
        }
        if (verify->parsed() || pipe->parsed()) {
            int code = run_pipeline(cfg);
            CaseConfig c = case_from_config(cfg);
            std::cout << "case " << c.label << ": artifacts in " << cfg.out_dir
                      << (code == 0 ? "" : " (no accepted index)") << "\n";
            return code;
        }
        if (plot->parsed()) {
            int code = run_plot_data(cfg);
            std::cout << "figure grids written to " << cfg.out_dir << "\n";
            return code;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: E_INTERNAL: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
