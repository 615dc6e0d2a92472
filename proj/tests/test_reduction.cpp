#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fibaux/reduction.hpp"
#include "fibaux/verify.hpp"

#include <random>

using namespace fibaux;

namespace {

Expr S(const std::string& s) { return make_sym(s); }

// u_t - (u^2)_xx - p u + q u^3 in jet form ((u^2)_xx = 2 u_x^2 + 2 u u_xx).
Expr heat_lhs_cubic(int qsign) {
    Expr u = S("u"), ux = S("u_x"), ut = S("u_t"), uxx = S("u_xx");
    Expr sq = make_num(2) * make_pow(ux, make_num(2)) + make_num(2) * u * uxx;
    return ut - sq - S("p") * u + make_num(qsign) * S("q") * make_pow(u, make_num(3));
}

} // namespace

TEST_CASE("jet rules for the two similarity variables") {
    Expr x = S("x"), t = S("t");
    SimilarityTransform eta{"eta", t / (x * x)};
    auto r = jet_rules(eta);
    Expr Up = S("U'"), Upp = S("U''");
    CHECK(r.at("u_x") == Up * (make_num(-2) * t * make_pow(x, make_num(-3))));
    CHECK(r.at("u_t") == Up * make_pow(x, make_num(-2)));
    CHECK(r.at("u_xx") ==
          Upp * make_pow(make_num(-2) * t * make_pow(x, make_num(-3)), make_num(2)) +
              Up * (make_num(6) * t * make_pow(x, make_num(-4))));

    SimilarityTransform zeta{"zeta", x * make_pow(t, make_num(Rational(-1, 2)))};
    auto r2 = jet_rules(zeta);
    CHECK(r2.at("u_x") == Up * make_pow(t, make_num(Rational(-1, 2))));
    CHECK(expand(r2.at("u_xx")) == Upp * make_pow(t, make_num(-1)));
    CHECK(r2.at("u_t") ==
          Up * (make_num(Rational(-1, 2)) * x * make_pow(t, make_num(Rational(-3, 2)))));

    // identity transform: trivial table
    SimilarityTransform id{"xi", x};
    auto r3 = jet_rules(id);
    CHECK(r3.at("u_x") == Up);
    CHECK(r3.at("u_xx") == Upp);
    CHECK(r3.at("u_t").is_zero());

    // the composite entry (u^2)_xx = 2(U'^2 + U U'') xi_x^2 + 2 U U' xi_xx
    Expr u2xx = make_num(2) * make_pow(S("u_x"), make_num(2)) +
                make_num(2) * S("u") * S("u_xx");
    Expr got = expand(substitute(u2xx, r));
    Expr xi_x = make_num(-2) * t * make_pow(x, make_num(-3));
    Expr xi_xx = make_num(6) * t * make_pow(x, make_num(-4));
    Expr U = S("U");
    Expr want = expand(make_num(2) * (make_pow(Up, make_num(2)) + U * Upp) *
                           make_pow(xi_x, make_num(2)) +
                       make_num(2) * U * Up * xi_xx);
    CHECK(got == want);
}

TEST_CASE("reduction reproduces the printed ODE for eta = t/x^2") {
    Expr x = S("x"), t = S("t");
    PdeSpec pde{"u", heat_lhs_cubic(+1)};
    SimilarityTransform tf{"eta", t / (x * x)};
    OdeSpec ode = reduce_pde(pde, tf);
    CHECK(ode.order == 2);
    CHECK(ode.variable == "eta");

    Expr U = S("U"), Up = S("U'"), Upp = S("U''");
    Expr want = Up * make_pow(x, make_num(-2)) -
                make_num(8) * make_pow(t, make_num(2)) * make_pow(Up, make_num(2)) *
                    make_pow(x, make_num(-6)) -
                make_num(8) * U * make_pow(t, make_num(2)) * Upp * make_pow(x, make_num(-6)) -
                make_num(12) * U * t * Up * make_pow(x, make_num(-4)) -
                S("p") * U + S("q") * make_pow(U, make_num(3));
    CHECK(ode.lhs == expand(want));
}

TEST_CASE("reduction reproduces the printed ODE for zeta = x/sqrt(t)") {
    Expr x = S("x"), t = S("t");
    PdeSpec pde{"u", heat_lhs_cubic(-1)};
    SimilarityTransform tf{"zeta", x * make_pow(t, make_num(Rational(-1, 2)))};
    OdeSpec ode = reduce_pde(pde, tf);

    Expr U = S("U"), Up = S("U'"), Upp = S("U''");
    Expr want = make_num(Rational(-1, 2)) * Up * x * make_pow(t, make_num(Rational(-3, 2))) -
                make_num(2) * make_pow(Up, make_num(2)) * make_pow(t, make_num(-1)) -
                make_num(2) * U * Upp * make_pow(t, make_num(-1)) -
                S("p") * U - S("q") * make_pow(U, make_num(3));
    CHECK(ode.lhs == expand(want));
}

TEST_CASE("trivial chain rule: u_t under xi = t is U'") {
    PdeSpec pde{"u", S("u_t")};
    SimilarityTransform tf{"xi", S("t")};
    OdeSpec ode = reduce_pde(pde, tf);
    CHECK(ode.lhs == S("U'"));
    CHECK(ode.order == 1);
}

TEST_CASE("round-trip numeric check against finite differences") {
    // u(x,t) = U(tf(x,t)) for a polynomial test profile U: the reduced ODE
    // evaluated at xi = tf(x,t) must match the jet-form PDE lhs computed by
    // finite differences of u.
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ux(0.6, 2.0), ut(0.4, 1.6);

    Expr xi = S("xi");
    Expr Uprof = make_num(Rational(1, 3)) * make_pow(xi, make_num(3)) -
                 make_num(2) * xi + make_num(1);
    Expr x = S("x"), t = S("t");
    PdeSpec pde{"u", heat_lhs_cubic(+1)};
    SimilarityTransform tf{"eta", t / (x * x)};
    OdeSpec ode = reduce_pde(pde, tf);

    // symbolic route: ODE lhs with U-jets bound to the profile
    std::map<std::string, Expr> binds;
    binds["U"] = Uprof;
    binds["U'"] = diff(Uprof, "xi");
    binds["U''"] = diff(binds["U'"], "xi");
    Expr sym_route = substitute(ode.lhs, binds); // still contains x, t, xi

    // numeric route: evaluate the PDE residual of u(x,t) by finite differences
    Expr u_xt = substitute(Uprof, {{"xi", tf.definition}});
    PdeSpec pde_fd = pde;
    int checked = 0;
    for (int i = 0; i < 50; ++i) {
        double xv = ux(rng), tv = ut(rng);
        EvalPoint p{{"x", xv}, {"t", tv}, {"p", 0.7}, {"q", -1.3}};
        EvalPoint ps = p;
        ps["xi"] = tv / (xv * xv);
        EvalResult sv = eval_expr(sym_route, ps);
        REQUIRE(sv.ok);

        // finite differences on u(x,t)
        auto val = [&](double xx, double tt) {
            EvalPoint q{{"x", xx}, {"t", tt}};
            EvalResult r = eval_expr(u_xt, q);
            REQUIRE(r.ok);
            return r.value;
        };
        double hx = 1e-4 * std::max(1.0, std::abs(xv));
        double ht = 1e-4 * std::max(1.0, std::abs(tv));
        double uxval = (8 * (val(xv + hx, tv) - val(xv - hx, tv)) -
                        (val(xv + 2 * hx, tv) - val(xv - 2 * hx, tv))) / (12 * hx);
        double utval = (8 * (val(xv, tv + ht) - val(xv, tv - ht)) -
                        (val(xv, tv + 2 * ht) - val(xv, tv - 2 * ht))) / (12 * ht);
        double uxxval = (-val(xv + 2 * hx, tv) + 16 * val(xv + hx, tv) - 30 * val(xv, tv) +
                         16 * val(xv - hx, tv) - val(xv - 2 * hx, tv)) / (12 * hx * hx);
        EvalPoint pj = p;
        pj["u"] = val(xv, tv);
        pj["u_x"] = uxval;
        pj["u_t"] = utval;
        pj["u_xx"] = uxxval;
        EvalResult fv = eval_expr(pde_fd.lhs, pj);
        REQUIRE(fv.ok);
        double denom = std::max(1.0, std::abs(sv.value));
        CHECK(std::abs(sv.value - fv.value) / denom < 1e-6);
        checked++;
    }
    CHECK(checked == 50);
}

TEST_CASE("unsupported higher derivatives are rejected") {
    PdeSpec pde{"u", S("u_xxx")};
    SimilarityTransform tf{"eta", S("t") / (S("x") * S("x"))};
    CHECK_THROWS_AS(reduce_pde(pde, tf), Error);
}
