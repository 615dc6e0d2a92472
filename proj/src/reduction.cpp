#include "fibaux/reduction.hpp"

#include <algorithm>

namespace fibaux {

namespace {

// u_xxt-style names: "u_" + sorted suffix keeps mixed partials canonical.
std::string jet_successor(const std::string& sym, const std::string& var) {
    if (sym == "u") return "u_" + var;
    if (sym.rfind("u_", 0) == 0) {
        std::string suffix = sym.substr(2) + var;
        std::sort(suffix.begin(), suffix.end());
        return "u_" + suffix;
    }
    return "";
}

} // namespace

Expr total_derivative(const Expr& e, const std::string& var) {
    switch (e.kind()) {
        case Kind::Num: return make_num(0);
        case Kind::Sym: {
            const std::string& s = e.sym_name();
            if (s == var) return make_num(1);
            std::string succ = jet_successor(s, var);
            if (!succ.empty()) return make_sym(succ);
            return make_num(0); // parameters and the other independent variable
        }
        case Kind::Add: {
            std::vector<Expr> ks;
            for (const auto& c : e.children()) ks.push_back(total_derivative(c, var));
            return make_add(std::move(ks));
        }
        case Kind::Mul: {
            const auto& fs = e.children();
            std::vector<Expr> sum;
            for (size_t i = 0; i < fs.size(); ++i) {
                std::vector<Expr> prod;
                for (size_t j = 0; j < fs.size(); ++j)
                    prod.push_back(i == j ? total_derivative(fs[j], var) : fs[j]);
                sum.push_back(make_mul(std::move(prod)));
            }
            return make_add(std::move(sum));
        }
        case Kind::Pow: {
            const Expr& b = e.children()[0];
            const Expr& x = e.children()[1];
            if (total_derivative(x, var).is_zero()) {
                return make_mul({x, make_pow(b, x - make_num(1)), total_derivative(b, var)});
            }
            Expr t1 = make_mul({total_derivative(x, var), make_fun(FunTag::Log, {b})});
            Expr t2 = make_mul({x, total_derivative(b, var), make_pow(b, make_num(-1))});
            return make_mul({e, make_add({t1, t2})});
        }
        case Kind::Fun: {
            // chain through the scalar functions exactly as diff() does
            Expr inner = e.children().back();
            Expr du = total_derivative(inner, var);
            if (du.is_zero()) return make_num(0);
            // reuse diff by introducing a fresh placeholder for the argument
            Expr w = make_sym("__w");
            std::vector<Expr> args = e.children();
            args.back() = w;
            Expr outer = make_fun(e.fun_tag(), std::move(args), e.sqrt_nonneg());
            Expr douter = diff(outer, "__w");
            return substitute(douter, {{"__w", inner}}) * du;
        }
    }
    throw Error("E_INTERNAL", "total_derivative: bad node");
}

std::map<std::string, Expr> jet_rules(const SimilarityTransform& tf) {
    const Expr& xi = tf.definition;
    Expr xi_x = diff(xi, "x");
    Expr xi_t = diff(xi, "t");
    Expr xi_xx = diff(xi_x, "x");
    Expr xi_xt = diff(xi_x, "t");
    Expr xi_tt = diff(xi_t, "t");
    Expr U = make_sym("U"), Up = make_sym("U'"), Upp = make_sym("U''");
    std::map<std::string, Expr> rules;
    rules["u"] = U;
    rules["u_x"] = Up * xi_x;
    rules["u_t"] = Up * xi_t;
    rules["u_xx"] = Upp * make_pow(xi_x, make_num(2)) + Up * xi_xx;
    rules["u_tx"] = Upp * xi_x * xi_t + Up * xi_xt;
    rules["u_xt"] = rules["u_tx"];
    rules["u_tt"] = Upp * make_pow(xi_t, make_num(2)) + Up * xi_tt;
    return rules;
}

OdeSpec reduce_pde(const PdeSpec& pde, const SimilarityTransform& tf) {
    auto rules = jet_rules(tf);
    for (const auto& s : free_symbols(pde.lhs)) {
        if (s.rfind("u_", 0) == 0 && !rules.count(s))
            throw Error("E_REDUCE", "derivative order beyond 2 not supported: " + s);
    }
    OdeSpec ode;
    ode.variable = tf.xi;
    ode.lhs = expand(substitute(pde.lhs, rules));
    ode.order = contains_symbol(ode.lhs, "U''") ? 2
              : contains_symbol(ode.lhs, "U'") ? 1
              : 0;
    if (ode.order > 2)
        throw Error("E_REDUCE", "internal invariant violation: reduced order above 2");
    return ode;
}

} // namespace fibaux
