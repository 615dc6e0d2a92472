#include "fibaux/verify.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fibaux {

namespace {

bool is_integral(double v) { return std::abs(v - std::round(v)) < 1e-12; }

struct EvalCtx {
    const EvalPoint& pt;
    std::string fail;

    double get(const std::string& name, bool& ok) {
        auto it = pt.find(name);
        if (it != pt.end()) { ok = true; return it->second; }
        if (name == "pi") { ok = true; return M_PI; }
        ok = false;
        return 0;
    }
};

// Recursive evaluator; returns NaN and sets ctx.fail on domain violations.
double eval_rec(const Expr& e, EvalCtx& ctx) {
    switch (e.kind()) {
        case Kind::Num: return e.num_value().to_double();
        case Kind::Sym: {
            bool ok = false;
            double v = ctx.get(e.sym_name(), ok);
            if (!ok) ctx.fail = "unbound symbol " + e.sym_name();
            return v;
        }
        case Kind::Add: {
            double s = 0;
            for (const auto& c : e.children()) {
                s += eval_rec(c, ctx);
                if (!ctx.fail.empty()) return NAN;
            }
            return s;
        }
        case Kind::Mul: {
            double s = 1;
            for (const auto& c : e.children()) {
                s *= eval_rec(c, ctx);
                if (!ctx.fail.empty()) return NAN;
            }
            return s;
        }
        case Kind::Pow: {
            double b = eval_rec(e.children()[0], ctx);
            if (!ctx.fail.empty()) return NAN;
            double x = eval_rec(e.children()[1], ctx);
            if (!ctx.fail.empty()) return NAN;
            if (b == 0) {
                if (x > 0) return 0;
                ctx.fail = "zero base with nonpositive exponent";
                return NAN;
            }
            if (b < 0 && !is_integral(x)) {
                ctx.fail = "negative base with non-integer exponent in " + e.str();
                return NAN;
            }
            double r = std::pow(b, x);
            if (!std::isfinite(r)) {
                ctx.fail = "overflow in pow";
                return NAN;
            }
            return r;
        }
        case Kind::Fun: {
            if (e.fun_tag() == FunTag::Hyp2F1) {
                double a[4];
                for (int i = 0; i < 4; ++i) {
                    a[i] = eval_rec(e.children()[i], ctx);
                    if (!ctx.fail.empty()) return NAN;
                }
                try {
                    return hyp2f1(a[0], a[1], a[2], a[3]);
                } catch (const Error& err) {
                    ctx.fail = err.what();
                    return NAN;
                }
            }
            double u = eval_rec(e.children()[0], ctx);
            if (!ctx.fail.empty()) return NAN;
            switch (e.fun_tag()) {
                case FunTag::Sqrt:
                    if (u < 0) {
                        ctx.fail = "sqrt of negative value in " + e.str();
                        return NAN;
                    }
                    return std::sqrt(u);
                case FunTag::Abs: return std::abs(u);
                case FunTag::Sign: return u > 0 ? 1.0 : (u < 0 ? -1.0 : 0.0);
                case FunTag::Sin: return std::sin(u);
                case FunTag::Cos: return std::cos(u);
                case FunTag::ArcTan: return std::atan(u);
                case FunTag::Exp: {
                    double r = std::exp(u);
                    if (!std::isfinite(r)) { ctx.fail = "overflow in exp"; return NAN; }
                    return r;
                }
                case FunTag::Log:
                    if (u <= 0) {
                        ctx.fail = "log of nonpositive value in " + e.str();
                        return NAN;
                    }
                    return std::log(u);
                default:
                    ctx.fail = "unsupported function";
                    return NAN;
            }
        }
    }
    ctx.fail = "bad node";
    return NAN;
}

} // namespace

EvalResult eval_expr(const Expr& e, const EvalPoint& pt) {
    EvalCtx ctx{pt, {}};
    double v = eval_rec(e, ctx);
    EvalResult r;
    if (!ctx.fail.empty()) {
        r.ok = false;
        r.reason = ctx.fail;
        return r;
    }
    if (!std::isfinite(v)) {
        r.ok = false;
        r.reason = "non-finite result";
        return r;
    }
    r.ok = true;
    r.value = v;
    return r;
}

namespace {

// Jet names the residual computation understands, with the derivative route
// from the candidate.
std::vector<std::pair<std::string, std::pair<int, int>>> jet_orders = {
    {"u", {0, 0}},  {"u_x", {1, 0}},  {"u_t", {0, 1}},
    {"u_xx", {2, 0}}, {"u_tt", {0, 2}}, {"u_tx", {1, 1}}, {"u_xt", {1, 1}},
};

struct ResidualEvaluator {
    Expr residual;                 // pde lhs with jets substituted symbolically
    Expr candidate;
    std::vector<std::string> fd_jets; // jets needed for the FD cross-check
    const PdeSpec* pde;

    ResidualEvaluator(const PdeSpec& p, const Expr& cand) : candidate(cand), pde(&p) {
        std::map<std::string, Expr> binds;
        auto syms = free_symbols(p.lhs);
        for (const auto& [name, ord] : jet_orders) {
            if (!syms.count(name)) continue;
            Expr d = cand;
            for (int i = 0; i < ord.first; ++i) d = diff(d, "x");
            for (int i = 0; i < ord.second; ++i) d = diff(d, "t");
            binds[name] = d;
            fd_jets.push_back(name);
        }
        residual = substitute(p.lhs, binds);
    }

    // 4th-order central differences of the candidate.
    bool fd_residual(const EvalPoint& base, double x, double t, double& out) const {
        auto val = [&](double xx, double tt, double& v) {
            EvalPoint p = base;
            p["x"] = xx;
            p["t"] = tt;
            EvalResult r = eval_expr(candidate, p);
            v = r.value;
            return r.ok;
        };
        double hx = 1e-4 * std::max(1.0, std::abs(x));
        double ht = 1e-4 * std::max(1.0, std::abs(t));
        EvalPoint jp = base;
        jp["x"] = x;
        jp["t"] = t;
        for (const auto& name : fd_jets) {
            double v = 0;
            if (name == "u") {
                if (!val(x, t, v)) return false;
            } else if (name == "u_x" || name == "u_t") {
                bool xdir = name == "u_x";
                double h = xdir ? hx : ht;
                double f1, f2, f3, f4;
                if (!val(xdir ? x + h : x, xdir ? t : t + h, f1)) return false;
                if (!val(xdir ? x - h : x, xdir ? t : t - h, f2)) return false;
                if (!val(xdir ? x + 2 * h : x, xdir ? t : t + 2 * h, f3)) return false;
                if (!val(xdir ? x - 2 * h : x, xdir ? t : t - 2 * h, f4)) return false;
                v = (8 * (f1 - f2) - (f3 - f4)) / (12 * h);
            } else if (name == "u_xx" || name == "u_tt") {
                bool xdir = name == "u_xx";
                double h = xdir ? hx : ht;
                double f0, f1, f2, f3, f4;
                if (!val(x, t, f0)) return false;
                if (!val(xdir ? x + h : x, xdir ? t : t + h, f1)) return false;
                if (!val(xdir ? x - h : x, xdir ? t : t - h, f2)) return false;
                if (!val(xdir ? x + 2 * h : x, xdir ? t : t + 2 * h, f3)) return false;
                if (!val(xdir ? x - 2 * h : x, xdir ? t : t - 2 * h, f4)) return false;
                v = (-f3 + 16 * f1 - 30 * f0 + 16 * f2 - f4) / (12 * h * h);
            } else { // mixed u_xt
                double fpp, fpm, fmp, fmm;
                if (!val(x + hx, t + ht, fpp)) return false;
                if (!val(x + hx, t - ht, fpm)) return false;
                if (!val(x - hx, t + ht, fmp)) return false;
                if (!val(x - hx, t - ht, fmm)) return false;
                v = (fpp - fpm - fmp + fmm) / (4 * hx * ht);
            }
            jp[name] = v;
        }
        EvalResult r = eval_expr(pde->lhs, jp);
        if (!r.ok) return false;
        out = r.value;
        return true;
    }
};

ResidualReport grid_core(const PdeSpec& pde, const Expr& candidate, const GridSpec& grid,
                         const EvalPoint& params, bool keep_samples, bool parallel) {
    if (grid.nx < 2 || grid.nt < 2)
        throw Error("E_GRID", "grid resolution must be at least 2 per axis");
    ResidualEvaluator ev(pde, candidate);
    long n = static_cast<long>(grid.nx) * grid.nt;
    std::vector<GridSample> pts(static_cast<size_t>(n));
    std::vector<signed char> fd_state(static_cast<size_t>(n), 0); // 0 none, 1 ok, 2 mismatch
    double dx = (grid.x1 - grid.x0) / (grid.nx - 1);
    double dt = (grid.t1 - grid.t0) / (grid.nt - 1);

    auto work = [&](long idx) {
        long it = idx / grid.nx;
        long ix = idx % grid.nx;
        double x = grid.x0 + dx * static_cast<double>(ix);
        double t = grid.t0 + dt * static_cast<double>(it);
        EvalPoint p = params;
        p["x"] = x;
        p["t"] = t;
        GridSample& s = pts[static_cast<size_t>(idx)];
        s.x = x;
        s.t = t;
        EvalResult uv = eval_expr(ev.candidate, p);
        EvalResult rv = eval_expr(ev.residual, p);
        if (!uv.ok || !rv.ok) {
            s.in_domain = false;
            s.u = NAN;
            s.residual = NAN;
            return;
        }
        s.in_domain = true;
        s.u = uv.value;
        s.residual = rv.value;
        double fd = 0;
        if (ev.fd_residual(params, x, t, fd)) {
            double rel = std::abs(rv.value - fd) / std::max(1.0, std::abs(rv.value));
            fd_state[static_cast<size_t>(idx)] = rel > 1e-4 ? 2 : 1;
        }
    };

    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long i = 0; i < n; ++i) work(i);
    } else {
        for (long i = 0; i < n; ++i) work(i);
    }

    ResidualReport rep;
    rep.grid = grid;
    rep.params = params;
    rep.total_points = n;
    double sum = 0;
    long in = 0;
    for (long i = 0; i < n; ++i) {
        const GridSample& s = pts[static_cast<size_t>(i)];
        if (!s.in_domain) {
            rep.out_of_domain++;
            continue;
        }
        in++;
        double a = std::abs(s.residual);
        rep.max_abs = std::max(rep.max_abs, a);
        sum += a;
        if (fd_state[static_cast<size_t>(i)] != 0) {
            rep.fd_checked++;
            if (fd_state[static_cast<size_t>(i)] == 2) rep.fd_disagreements++;
        }
    }
    if (in == 0) throw Error("E_EMPTY_GRID", "grid is entirely out of domain");
    rep.mean_abs = sum / static_cast<double>(in);
    if (keep_samples) rep.samples = std::move(pts);
    return rep;
}

} // namespace

ResidualReport pde_residual_grid(const PdeSpec& pde, const Expr& candidate,
                                 const GridSpec& grid, const EvalPoint& params,
                                 bool keep_samples) {
    return grid_core(pde, candidate, grid, params, keep_samples, true);
}

ResidualReport pde_residual_grid_serial(const PdeSpec& pde, const Expr& candidate,
                                        const GridSpec& grid, const EvalPoint& params,
                                        bool keep_samples) {
    return grid_core(pde, candidate, grid, params, keep_samples, false);
}

double ode_residual_numeric(const AuxiliaryEquation& ode, const Expr& candidate,
                            const std::vector<EvalPoint>& points) {
    Expr res = ode_residual_expr(candidate, ode);
    double m = 0;
    long in = 0;
    for (const auto& p : points) {
        EvalResult r = eval_expr(res, p);
        if (!r.ok) continue;
        in++;
        m = std::max(m, std::abs(r.value));
    }
    if (in == 0) throw Error("E_EMPTY_GRID", "all points out of domain");
    return m;
}

double ode_residual_numeric(const OdeSpec& ode, const Expr& candidate,
                            const std::vector<EvalPoint>& points) {
    std::map<std::string, Expr> binds;
    binds["U"] = candidate;
    binds["U'"] = diff(candidate, ode.variable);
    binds["U''"] = diff(binds["U'"], ode.variable);
    Expr res = substitute(ode.lhs, binds);
    double m = 0;
    long in = 0;
    for (const auto& p : points) {
        EvalResult r = eval_expr(res, p);
        if (!r.ok) continue;
        in++;
        m = std::max(m, std::abs(r.value));
    }
    if (in == 0) throw Error("E_EMPTY_GRID", "all points out of domain");
    return m;
}

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string report_to_json(const ResidualReport& r) {
    nlohmann::ordered_json j;
    j["case"] = r.case_label;
    j["solution"] = r.solution_id;
    j["grid"] = {{"x", {r.grid.x0, r.grid.x1, r.grid.nx}},
                 {"t", {r.grid.t0, r.grid.t1, r.grid.nt}}};
    nlohmann::ordered_json pj = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.params) pj[k] = fmt17(v);
    j["params"] = pj;
    j["max_abs_residual"] = fmt17(r.max_abs);
    j["mean_abs_residual"] = fmt17(r.mean_abs);
    j["total_points"] = r.total_points;
    j["out_of_domain"] = r.out_of_domain;
    j["fd_checked"] = r.fd_checked;
    j["fd_disagreements"] = r.fd_disagreements;
    return j.dump(2);
}

std::string report_samples_csv(const ResidualReport& r) {
    std::ostringstream os;
    os << "x,t,u,residual,in_domain\n";
    for (const auto& s : r.samples) {
        os << fmt17(s.x) << "," << fmt17(s.t) << ",";
        if (s.in_domain)
            os << fmt17(s.u) << "," << fmt17(s.residual) << ",1\n";
        else
            os << ",,0\n";
    }
    return os.str();
}

} // namespace fibaux
