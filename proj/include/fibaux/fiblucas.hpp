#ifndef FIBAUX_FIBLUCAS_HPP
#define FIBAUX_FIBLUCAS_HPP

#include "fibaux/expr.hpp"

namespace fibaux {

enum class Family { Fibonacci, Lucas };
enum class Variant { EtaForm, ZetaForm };

// Which polynomial family/one-variable form an auxiliary equation describes.
// The index is kept as a polynomial so it can stay symbolic ("n") or be a
// concrete integer.
struct FamilyId {
    Family family = Family::Fibonacci;
    Variant variant = Variant::EtaForm;
    MultiPoly index = MultiPoly::var("n");

    FamilyId with_n(long n) const {
        FamilyId c = *this;
        c.index = MultiPoly::constant(n);
        return c;
    }
    std::string variable() const { return variant == Variant::EtaForm ? "eta" : "zeta"; }
};

// Linear second-order ODE in canonical form z'' = alpha z' + beta z. `lead`
// is the polynomial the denominators of alpha and beta divide (eta(1+4eta)
// or 4+zeta^2); clearing it recovers the self-adjoint-style form.
struct AuxiliaryEquation {
    std::string variable;
    RatFunc alpha;
    RatFunc beta;
    MultiPoly lead;
    FamilyId source;
};

// F1 = 1, F2 = x, F_n = x F_{n-1} + y F_{n-2}; n >= 1.
MultiPoly fib_poly(long n);
// L0 = 2, L1 = x, L_n = x L_{n-1} + y L_{n-2}; n >= 0.
MultiPoly lucas_poly(long n);

// One-variable forms: F_n(1, eta), L_n(1, eta), F_n(zeta, 1), L_n(zeta, 1).
MultiPoly one_var_poly(Family f, Variant v, long n);

AuxiliaryEquation aux_ode(const FamilyId& id);

// Cleared-denominator residual of a univariate candidate in the ODE:
// lead * c'' - (lead*alpha) * c' - (lead*beta) * c. Zero polynomial iff the
// candidate solves the equation.
MultiPoly ode_residual_exact(const MultiPoly& candidate, const AuxiliaryEquation& ode);

// Residual as an Expr for non-polynomial candidates (numeric audits).
Expr ode_residual_expr(const Expr& candidate, const AuxiliaryEquation& ode);

// The non-polynomial companion solution: L_n(1,eta)/sqrt|1+4eta| for the
// eta Fibonacci equation, sqrt|1+4eta| F_n(1,eta) for the eta Lucas one,
// L_n(zeta,1)/sqrt(zeta^2+4) and sqrt(zeta^2+4) F_n(zeta,1) for the zeta
// forms. Requires a concrete index.
Expr second_solution(const FamilyId& id);

// Closed forms F_n(zeta,1) = (phi^n - psi^n)/(phi - psi), L_n = phi^n + psi^n
// with phi, psi = (zeta +- sqrt(zeta^2+4))/2. ZetaForm only; the index may be
// symbolic.
Expr binet_closed_form(const FamilyId& id);

// General solution C1*y1 + C2*y2 of the zeta-form equations via Binet.
Expr zeta_general_solution(const FamilyId& id, const Expr& c1, const Expr& c2);

} // namespace fibaux

#endif
