#include "fibaux/caseio.hpp"

#include <json.hpp>

#include <fstream>

namespace fibaux {

namespace {

using nlohmann::json;

GridSpec grid_from_json(const json& j) {
    GridSpec g;
    auto jx = j.at("x"), jt = j.at("t");
    g.x0 = jx.at(0).get<double>();
    g.x1 = jx.at(1).get<double>();
    g.nx = jx.at(2).get<int>();
    g.t0 = jt.at(0).get<double>();
    g.t1 = jt.at(1).get<double>();
    g.nt = jt.at(2).get<int>();
    return g;
}

} // namespace

CaseConfig load_case(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("E_IO", "cannot open case file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error("E_JSON", std::string("bad case file: ") + e.what());
    }
    CaseConfig c;
    c.label = j.at("label").get<std::string>();
    c.pde.lhs = expand(parse_sexpr(j.at("pde").get<std::string>()));
    c.transform.definition = parse_sexpr(j.at("transform").get<std::string>());
    c.transform.xi = j.value("xi", "xi");

    std::string fam = j.value("family", "fibonacci");
    std::string var = j.value("variant", "eta");
    c.family_id.family = fam == "lucas" ? Family::Lucas : Family::Fibonacci;
    c.family_id.variant = var == "zeta" ? Variant::ZetaForm : Variant::EtaForm;
    c.reciprocal = j.value("ansatz", "direct") == std::string("reciprocal");

    if (j.contains("n_range")) {
        c.n_lo = j["n_range"].at(0).get<long>();
        c.n_hi = j["n_range"].at(1).get<long>();
    }
    if (j.contains("screen_grid")) c.screen_grid = grid_from_json(j["screen_grid"]);
    if (j.contains("screen_params"))
        for (auto& [k, v] : j["screen_params"].items())
            c.screen_params[k] = v.get<double>();
    if (j.contains("printed_solutions"))
        for (auto& [k, v] : j["printed_solutions"].items())
            c.printed[k] = parse_sexpr(v.get<std::string>());
    if (j.contains("printed_branch"))
        for (auto& [k, v] : j["printed_branch"].items())
            c.printed_branch[k] = expr_to_ratfunc(parse_sexpr(v.get<std::string>()));
    c.comparison_note = j.value("comparison_note", "");
    if (j.contains("figures"))
        for (const auto& f : j["figures"]) {
            FigureJob job;
            job.id = f.at("id").get<std::string>();
            job.solution = f.at("solution").get<std::string>();
            job.grid = grid_from_json(f.at("grid"));
            if (f.contains("params"))
                for (auto& [k, v] : f["params"].items())
                    job.params[k] = parse_sexpr(v.get<std::string>());
            if (!c.printed.count(job.solution))
                throw Error("E_JSON", "figure " + job.id + " references unknown solution " +
                                          job.solution);
            c.figures.push_back(std::move(job));
        }
    return c;
}

std::string branches_to_json(const std::string& label, SolveMode mode,
                             const AlgebraicSystem& sys,
                             const std::vector<SolutionBranch>& branches) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& b : branches) {
        nlohmann::ordered_json jb;
        jb["case"] = label;
        jb["mode"] = mode_name(mode);
        jb["n"] = "n"; // systems are solved with the index symbolic
        nlohmann::ordered_json asg = nlohmann::ordered_json::object();
        for (const auto& [k, v] : b.assignments) asg[k] = to_sexpr(ratfunc_to_expr(v));
        jb["assignments"] = asg;
        jb["free"] = b.free_symbols;
        jb["verified_exact"] = b.verified_exact;
        if (b.approximate) {
            jb["approximate"] = true;
            jb["residual_bound"] = b.residual_bound;
        }
        auto origin_list = [&](const std::vector<int>& idx) {
            std::vector<std::string> v;
            for (int i : idx) v.push_back(sys.origin[static_cast<size_t>(i)]);
            return v;
        };
        jb["resolved"] = origin_list(b.resolved);
        jb["unresolved"] = origin_list(b.unresolved);
        jb["nontriviality"] = origin_list(b.nontriviality);
        out.push_back(std::move(jb));
    }
    return out.dump(2);
}

} // namespace fibaux
