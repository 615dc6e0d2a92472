#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fibaux/fiblucas.hpp"
#include "fibaux/verify.hpp"

using namespace fibaux;

namespace {

const MultiPoly X = MultiPoly::var("x");
const MultiPoly Y = MultiPoly::var("y");

// Recurrence oracle used against Binet: plain double recurrence.
double recurrence_value(Family f, long n, double zeta) {
    double a, b; // value at index i-1, i
    if (f == Family::Fibonacci) {
        if (n == 1) return 1;
        a = 1; b = zeta; // F1, F2
        for (long i = 3; i <= n; ++i) { double c = zeta * b + a; a = b; b = c; }
        return b;
    }
    if (n == 0) return 2;
    a = 2; b = zeta; // L0, L1
    for (long i = 2; i <= n; ++i) { double c = zeta * b + a; a = b; b = c; }
    return b;
}

} // namespace

TEST_CASE("fib/lucas polynomial base cases and unrolled values") {
    CHECK(fib_poly(1) == MultiPoly::constant(1));
    CHECK(fib_poly(2) == X);
    CHECK(fib_poly(3) == X * X + Y);
    CHECK(fib_poly(6).str() == "x^5 + 4*x^3*y + 3*x*y^2");
    CHECK(lucas_poly(0) == MultiPoly::constant(2));
    CHECK(lucas_poly(2) == X * X + Y * Rational(2));
    CHECK(lucas_poly(4).str() == "x^4 + 4*x^2*y + 2*y^2");
    CHECK_THROWS_AS(fib_poly(0), Error);
    CHECK_THROWS_AS(lucas_poly(-1), Error);
}

TEST_CASE("aux_ode canonical coefficients") {
    FamilyId lz{Family::Lucas, Variant::ZetaForm};
    AuxiliaryEquation eq4 = aux_ode(lz);
    MultiPoly zeta = MultiPoly::var("zeta");
    MultiPoly n = MultiPoly::var("n");
    MultiPoly lead = MultiPoly::constant(4) + zeta * zeta;
    CHECK(eq4.alpha == RatFunc(-zeta, lead));
    CHECK(eq4.beta == RatFunc(n * n, lead));

    FamilyId fz{Family::Fibonacci, Variant::ZetaForm};
    AuxiliaryEquation eq3 = aux_ode(fz);
    CHECK(eq3.alpha == RatFunc(-zeta * Rational(3), lead));
    CHECK(eq3.beta == RatFunc(n * n - MultiPoly::constant(1), lead));

    FamilyId fe{Family::Fibonacci, Variant::EtaForm};
    AuxiliaryEquation eq1 = aux_ode(fe.with_n(2));
    CHECK(eq1.beta.is_zero()); // (n-1)(n-2) vanishes at n = 2
}

TEST_CASE("exact ODE residuals vanish for all four pairings, n = 1..12") {
    for (long n = 1; n <= 12; ++n) {
        FamilyId fe{Family::Fibonacci, Variant::EtaForm};
        MultiPoly fn = one_var_poly(Family::Fibonacci, Variant::EtaForm, n);
        CHECK(ode_residual_exact(fn, aux_ode(fe.with_n(n))).is_zero());

        FamilyId le{Family::Lucas, Variant::EtaForm};
        MultiPoly ln = one_var_poly(Family::Lucas, Variant::EtaForm, n);
        CHECK(ode_residual_exact(ln, aux_ode(le.with_n(n))).is_zero());

        FamilyId fz{Family::Fibonacci, Variant::ZetaForm};
        MultiPoly fzn = one_var_poly(Family::Fibonacci, Variant::ZetaForm, n);
        CHECK(ode_residual_exact(fzn, aux_ode(fz.with_n(n))).is_zero());

        FamilyId lz{Family::Lucas, Variant::ZetaForm};
        MultiPoly lzn = one_var_poly(Family::Lucas, Variant::ZetaForm, n);
        CHECK(ode_residual_exact(lzn, aux_ode(lz.with_n(n))).is_zero());
    }
}

TEST_CASE("residual examples and wrong-index control") {
    // F3(1,eta) = 1 + eta solves the eta Fibonacci equation at n = 3
    MultiPoly f3 = one_var_poly(Family::Fibonacci, Variant::EtaForm, 3);
    CHECK(f3.str() == "eta + 1");
    FamilyId fe{Family::Fibonacci, Variant::EtaForm};
    CHECK(ode_residual_exact(f3, aux_ode(fe.with_n(3))).is_zero());
    CHECK(!ode_residual_exact(f3, aux_ode(fe.with_n(4))).is_zero());

    MultiPoly l2 = one_var_poly(Family::Lucas, Variant::ZetaForm, 2);
    CHECK(l2.str() == "zeta^2 + 2");
    FamilyId lz{Family::Lucas, Variant::ZetaForm};
    CHECK(ode_residual_exact(l2, aux_ode(lz.with_n(2))).is_zero());
}

TEST_CASE("second solutions satisfy their equations numerically") {
    std::vector<EvalPoint> eta_pts, zeta_pts;
    for (int i = 0; i < 20; ++i) {
        eta_pts.push_back({{"eta", 0.05 + 0.12 * i}});
        zeta_pts.push_back({{"zeta", -2.8 + 0.3 * i}});
    }
    for (long n = 1; n <= 6; ++n) {
        FamilyId fe{Family::Fibonacci, Variant::EtaForm};
        CHECK(ode_residual_numeric(aux_ode(fe.with_n(n)), second_solution(fe.with_n(n)),
                                   eta_pts) < 1e-9);
        FamilyId le{Family::Lucas, Variant::EtaForm};
        CHECK(ode_residual_numeric(aux_ode(le.with_n(n)), second_solution(le.with_n(n)),
                                   eta_pts) < 1e-9);
        FamilyId fz{Family::Fibonacci, Variant::ZetaForm};
        CHECK(ode_residual_numeric(aux_ode(fz.with_n(n)), second_solution(fz.with_n(n)),
                                   zeta_pts) < 1e-9);
        FamilyId lz{Family::Lucas, Variant::ZetaForm};
        CHECK(ode_residual_numeric(aux_ode(lz.with_n(n)), second_solution(lz.with_n(n)),
                                   zeta_pts) < 1e-9);
    }
}

TEST_CASE("second solution spec anchors") {
    FamilyId fe{Family::Fibonacci, Variant::EtaForm};
    Expr s = second_solution(fe.with_n(3));
    // L3(1,eta) = 1 + 3 eta over sqrt|1+4eta|
    Expr eta = make_sym("eta");
    Expr expect = (make_num(1) + make_num(3) * eta) /
                  make_sqrt(make_fun(FunTag::Abs, {make_num(1) + make_num(4) * eta}));
    CHECK(s == expect);

    FamilyId lz{Family::Lucas, Variant::ZetaForm};
    Expr s2 = second_solution(lz.with_n(2));
    Expr zeta = make_sym("zeta");
    CHECK(s2 == make_sqrt(make_pow(zeta, make_num(2)) + make_num(4)) * zeta);

    // second branch of the eta region: eta < -1/4, radicand |1+4eta|
    std::vector<EvalPoint> low;
    for (int i = 0; i < 20; ++i) low.push_back({{"eta", -0.3 - 0.1 * i}});
    CHECK(ode_residual_numeric(aux_ode(fe.with_n(3)), s, low) < 1e-9);
}

TEST_CASE("binet closed forms match the recurrence") {
    FamilyId lz{Family::Lucas, Variant::ZetaForm};
    Expr l2 = binet_closed_form(lz.with_n(2));
    EvalResult r = eval_expr(l2, {{"zeta", 1.0}});
    REQUIRE(r.ok);
    CHECK(r.value == doctest::Approx(3.0).epsilon(1e-12)); // 1^2 + 2*1

    FamilyId fz{Family::Fibonacci, Variant::ZetaForm};
    Expr f1 = binet_closed_form(fz.with_n(1));
    r = eval_expr(f1, {{"zeta", 0.7}});
    REQUIRE(r.ok);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));

    for (double zeta : {-2.0, 1.0 / 3.0, 5.0}) {
        for (long n = 1; n <= 20; ++n) {
            Expr f = binet_closed_form(fz.with_n(n));
            Expr l = binet_closed_form(lz.with_n(n));
            EvalResult fv = eval_expr(f, {{"zeta", zeta}});
            EvalResult lv = eval_expr(l, {{"zeta", zeta}});
            REQUIRE(fv.ok);
            REQUIRE(lv.ok);
            double fr = recurrence_value(Family::Fibonacci, n, zeta);
            double lr = recurrence_value(Family::Lucas, n, zeta);
            CHECK(std::abs(fv.value - fr) / std::max(1.0, std::abs(fr)) < 1e-10);
            CHECK(std::abs(lv.value - lr) / std::max(1.0, std::abs(lr)) < 1e-10);
        }
    }
}

TEST_CASE("homogeneity and the L = F identity hold symbolically") {
    MultiPoly lam = MultiPoly::var("lambda");
    for (long n = 1; n <= 10; ++n) {
        MultiPoly f = fib_poly(n);
        MultiPoly scaled = f.substitute("x", lam * X).substitute("y", lam * lam * Y);
        CHECK(scaled == lam.pow(static_cast<int>(n - 1)) * f);
        MultiPoly l = lucas_poly(n);
        MultiPoly lscaled = l.substitute("x", lam * X).substitute("y", lam * lam * Y);
        CHECK(lscaled == lam.pow(static_cast<int>(n)) * l);
    }
    for (long n = 2; n <= 10; ++n)
        CHECK(lucas_poly(n) == fib_poly(n + 1) + Y * fib_poly(n - 1));
}

TEST_CASE("zeta general solution solves the equation numerically") {
    std::vector<EvalPoint> pts;
    for (int i = 0; i < 10; ++i) pts.push_back({{"zeta", -1.5 + 0.35 * i}});
    for (long n = 1; n <= 4; ++n) {
        FamilyId fz{Family::Fibonacci, Variant::ZetaForm};
        Expr z = zeta_general_solution(fz.with_n(n), make_num(Rational(3, 2)), make_num(-2));
        CHECK(ode_residual_numeric(aux_ode(fz.with_n(n)), z, pts) < 1e-9);
        FamilyId lz{Family::Lucas, Variant::ZetaForm};
        Expr z2 = zeta_general_solution(lz.with_n(n), make_num(1), make_num(Rational(1, 3)));
        CHECK(ode_residual_numeric(aux_ode(lz.with_n(n)), z2, pts) < 1e-9);
    }
}
