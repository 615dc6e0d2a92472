#ifndef FIBAUX_REDUCTION_HPP
#define FIBAUX_REDUCTION_HPP

#include "fibaux/expr.hpp"

namespace fibaux {

// PDE lhs as an expression over jet symbols u, u_x, u_t, u_xx, u_xt, u_tt
// with coefficients in x, t and parameters; convention lhs = 0.
struct PdeSpec {
    std::string unknown = "u";
    Expr lhs;
};

// u(x,t) = U(xi(x,t)).
struct SimilarityTransform {
    std::string xi;  // name of the new variable, e.g. "eta" or "zeta"
    Expr definition; // expression in x, t
};

// Reduced ODE over jet symbols U, U', U''. Coefficients may retain explicit
// x and t; `order` is the highest derivative order m.
struct OdeSpec {
    std::string unknown = "U";
    std::string variable;
    Expr lhs;
    int order = 0;
};

// Total derivative on the jet alphabet: d/dvar with u depending on (x, t),
// so e.g. total_derivative(u^2, "x") = 2 u u_x.
Expr total_derivative(const Expr& e, const std::string& var);

// Rewrite table {u -> U, u_x -> U' xi_x, u_xx -> U'' xi_x^2 + U' xi_xx, ...}.
std::map<std::string, Expr> jet_rules(const SimilarityTransform& tf);

OdeSpec reduce_pde(const PdeSpec& pde, const SimilarityTransform& tf);

} // namespace fibaux

#endif
