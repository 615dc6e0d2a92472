#include "fibaux/fiblucas.hpp"

namespace fibaux {

namespace {
const MultiPoly kX = MultiPoly::var("x");
const MultiPoly kY = MultiPoly::var("y");
} // namespace

MultiPoly fib_poly(long n) {
    if (n <= 0) throw Error("E_INDEX", "fib_poly requires n >= 1");
    MultiPoly f1 = MultiPoly::constant(1);
    if (n == 1) return f1;
    MultiPoly f2 = kX;
    for (long i = 3; i <= n; ++i) {
        MultiPoly f3 = kX * f2 + kY * f1;
        f1 = f2;
        f2 = f3;
    }
    return f2;
}

MultiPoly lucas_poly(long n) {
    if (n < 0) throw Error("E_INDEX", "lucas_poly requires n >= 0");
    MultiPoly l0 = MultiPoly::constant(2);
    if (n == 0) return l0;
    MultiPoly l1 = kX;
    for (long i = 2; i <= n; ++i) {
        MultiPoly l2 = kX * l1 + kY * l0;
        l0 = l1;
        l1 = l2;
    }
    return l1;
}

MultiPoly one_var_poly(Family f, Variant v, long n) {
    MultiPoly p = f == Family::Fibonacci ? fib_poly(n) : lucas_poly(n);
    if (v == Variant::EtaForm)
        return p.substitute("x", MultiPoly::constant(1)).substitute("y", MultiPoly::var("eta"));
    return p.substitute("x", MultiPoly::var("zeta")).substitute("y", MultiPoly::constant(1));
}

AuxiliaryEquation aux_ode(const FamilyId& id) {
    AuxiliaryEquation eq;
    eq.source = id;
    eq.variable = id.variable();
    MultiPoly n = id.index;
    MultiPoly one = MultiPoly::constant(1);
    if (id.variant == Variant::EtaForm) {
        MultiPoly eta = MultiPoly::var("eta");
        eq.lead = eta * (one + eta * Rational(4));
        if (id.family == Family::Fibonacci) {
            // eta(1+4eta) F'' - [(n-1) + 2(2n-5) eta] F' + (n-1)(n-2) F = 0
            MultiPoly a = (n - one) + (n * Rational(4) - MultiPoly::constant(10)) * eta;
            MultiPoly b = -(n - one) * (n - MultiPoly::constant(2));
            eq.alpha = RatFunc(a, eq.lead);
            eq.beta = RatFunc(b, eq.lead);
        } else {
            // eta(1+4eta) L'' - [(n-1) + 2(2n-3) eta] L' + n(n-1) L = 0
            MultiPoly a = (n - one) + (n * Rational(4) - MultiPoly::constant(6)) * eta;
            MultiPoly b = -n * (n - one);
            eq.alpha = RatFunc(a, eq.lead);
            eq.beta = RatFunc(b, eq.lead);
        }
    } else {
        MultiPoly zeta = MultiPoly::var("zeta");
        eq.lead = MultiPoly::constant(4) + zeta * zeta;
        if (id.family == Family::Fibonacci) {
            // (4+zeta^2) F'' + 3 zeta F' - (n^2-1) F = 0
            eq.alpha = RatFunc(-zeta * Rational(3), eq.lead);
            eq.beta = RatFunc(n * n - one, eq.lead);
        } else {
            // (4+zeta^2) L'' + zeta L' - n^2 L = 0
            eq.alpha = RatFunc(-zeta, eq.lead);
            eq.beta = RatFunc(n * n, eq.lead);
        }
    }
    return eq;
}

MultiPoly ode_residual_exact(const MultiPoly& candidate, const AuxiliaryEquation& ode) {
    const std::string& v = ode.variable;
    MultiPoly d1 = candidate.diff(v);
    MultiPoly d2 = d1.diff(v);
    RatFunc la = ode.alpha * RatFunc(ode.lead);
    RatFunc lb = ode.beta * RatFunc(ode.lead);
    if (!la.is_polynomial() || !lb.is_polynomial())
        throw Error("E_AUX", "alpha/beta denominators do not divide the leading polynomial");
    MultiPoly pa = la.num() * (Rational(1) / la.den().constant_value());
    MultiPoly pb = lb.num() * (Rational(1) / lb.den().constant_value());
    return ode.lead * d2 - pa * d1 - pb * candidate;
}

Expr ode_residual_expr(const Expr& candidate, const AuxiliaryEquation& ode) {
    const std::string& v = ode.variable;
    Expr d1 = diff(candidate, v);
    Expr d2 = diff(d1, v);
    Expr a = ratfunc_to_expr(ode.alpha);
    Expr b = ratfunc_to_expr(ode.beta);
    return d2 - a * d1 - b * candidate;
}

Expr second_solution(const FamilyId& id) {
    if (!id.index.is_constant())
        throw Error("E_INDEX", "second_solution requires a concrete index");
    long n = id.index.constant_value().to_long();
    if (id.variant == Variant::EtaForm) {
        Expr eta = make_sym("eta");
        Expr rad = make_fun(FunTag::Abs, {make_num(1) + make_num(4) * eta});
        Expr root = make_sqrt(rad);
        if (id.family == Family::Fibonacci) {
            Expr l = multipoly_to_expr(one_var_poly(Family::Lucas, Variant::EtaForm, n));
            return l / root;
        }
        Expr f = multipoly_to_expr(one_var_poly(Family::Fibonacci, Variant::EtaForm, n));
        return root * f;
    }
    Expr zeta = make_sym("zeta");
    Expr root = make_sqrt(make_pow(zeta, make_num(2)) + make_num(4));
    if (id.family == Family::Fibonacci) {
        Expr l = multipoly_to_expr(one_var_poly(Family::Lucas, Variant::ZetaForm, n));
        return l / root;
    }
    Expr f = multipoly_to_expr(one_var_poly(Family::Fibonacci, Variant::ZetaForm, n));
    return root * f;
}

Expr binet_closed_form(const FamilyId& id) {
    if (id.variant != Variant::ZetaForm)
        throw Error("E_INDEX", "binet_closed_form is defined for the zeta form");
    Expr zeta = make_sym("zeta");
    Expr n = multipoly_to_expr(id.index);
    Expr root = make_sqrt(make_pow(zeta, make_num(2)) + make_num(4));
    Expr half = make_num(Rational(1, 2));
    Expr phi = half * (zeta + root);
    Expr psi = half * (zeta - root);
    if (id.family == Family::Fibonacci)
        return (make_pow(phi, n) - make_pow(psi, n)) / root;
    return make_pow(phi, n) + make_pow(psi, n);
}

Expr zeta_general_solution(const FamilyId& id, const Expr& c1, const Expr& c2) {
    FamilyId fib = id, luc = id;
    fib.family = Family::Fibonacci;
    luc.family = Family::Lucas;
    Expr zeta = make_sym("zeta");
    Expr root = make_sqrt(make_pow(zeta, make_num(2)) + make_num(4));
    Expr f = binet_closed_form(fib);
    Expr l = binet_closed_form(luc);
    if (id.family == Family::Fibonacci)
        return c1 * f + c2 * (l / root);
    return c1 * l + c2 * root * f;
}

} // namespace fibaux
