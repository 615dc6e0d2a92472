#include "fibaux/ansatz.hpp"

#include <algorithm>
#include <climits>
#include <set>
#include <sstream>

namespace fibaux {

AnsatzSpec make_ansatz(int N, bool reciprocal, AuxiliaryEquation aux) {
    if (N < 0) throw Error("E_ANSATZ", "series truncation must be nonnegative");
    AnsatzSpec a;
    a.N = N;
    a.aux = std::move(aux);
    a.powers.push_back(0);
    a.coeffs.push_back("g0");
    for (int i = 1; i <= N; ++i) {
        a.powers.push_back(reciprocal ? -i : i);
        a.coeffs.push_back(reciprocal ? "gm" + std::to_string(i) : "g" + std::to_string(i));
    }
    return a;
}

AuxiliaryEquation aux_for_mode(const FamilyId& id, SolveMode mode) {
    AuxiliaryEquation eq = aux_ode(id);
    if (mode == SolveMode::Paper && id.variant == Variant::EtaForm) {
        MultiPoly eta = MultiPoly::var("eta");
        MultiPoly lead = eta * (MultiPoly::constant(1) + eta);
        MultiPoly anum = (eq.alpha * RatFunc(eq.lead)).num();
        MultiPoly bnum = (eq.beta * RatFunc(eq.lead)).num();
        eq.alpha = RatFunc(anum, lead);
        eq.beta = RatFunc(bnum, lead);
        eq.lead = lead;
    }
    return eq;
}

Expr eta_shifted_general_solution(const FamilyId& id, const Expr& c1, const Expr& c2) {
    if (id.variant != Variant::EtaForm)
        throw Error("E_ANSATZ", "shifted general solution is defined for the eta form");
    Expr n = multipoly_to_expr(id.index);
    Expr n2 = make_pow(n, make_num(2));
    Expr disc, absum, c;
    if (id.family == Family::Fibonacci) {
        disc = make_num(12) * n2 - make_num(60) * n + make_num(73);
        absum = make_num(9) - make_num(4) * n;
        c = make_num(9) - make_num(3) * n;
    } else {
        disc = make_num(12) * n2 - make_num(36) * n + make_num(25);
        absum = make_num(5) - make_num(4) * n;
        c = make_num(5) - make_num(3) * n;
    }
    Expr s = make_sqrt(disc);
    Expr half = make_num(Rational(1, 2));
    Expr a = half * (absum - s);
    Expr b = half * (absum + s);
    Expr w = make_num(1) + make_sym("eta");
    Expr one = make_num(1), two = make_num(2);
    Expr y1 = make_fun(FunTag::Hyp2F1, {a, b, c, w});
    Expr y2 = make_pow(w, one - c) *
              make_fun(FunTag::Hyp2F1, {a - c + one, b - c + one, two - c, w});
    return c1 * y1 + c2 * y2;
}

Expr general_aux_solution(const FamilyId& id, SolveMode mode, const Expr& c1, const Expr& c2) {
    if (id.variant == Variant::ZetaForm) return zeta_general_solution(id, c1, c2);
    if (mode == SolveMode::Paper) return eta_shifted_general_solution(id, c1, c2);
    throw Error("E_ANSATZ", "no closed general solution for the strict eta form");
}

namespace {

int min_exponent_of(const Expr& expanded, const std::string& sym) {
    int m = 0;
    auto scan_factor = [&](const Expr& f, int& local) {
        if (f.kind() == Kind::Sym && f.sym_name() == sym) local = std::min(local, 1);
        else if (f.kind() == Kind::Pow && f.children()[0].kind() == Kind::Sym &&
                 f.children()[0].sym_name() == sym && f.children()[1].is_integer())
            local = std::min(local, static_cast<int>(f.children()[1].num_value().to_long()));
    };
    auto scan_term = [&](const Expr& t) {
        int local = 0;
        if (t.kind() == Kind::Mul)
            for (const auto& f : t.children()) scan_factor(f, local);
        else
            scan_factor(t, local);
        m = std::min(m, local);
    };
    if (expanded.kind() == Kind::Add)
        for (const auto& t : expanded.children()) scan_term(t);
    else
        scan_term(expanded);
    return m;
}

std::string mono_label(const ExpVec& e, const std::vector<std::string>& basis) {
    std::ostringstream os;
    bool any = false;
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (any) os << "*";
        os << basis[i];
        if (e[i] != 1) os << "^" << e[i];
        any = true;
    }
    return any ? os.str() : "1";
}

} // namespace

AlgebraicSystem substitute_and_collect(const OdeSpec& ode, const AnsatzSpec& ansatz,
                                       SolveMode mode) {
    const std::string& xi = ansatz.aux.variable;
    if (!ode.variable.empty() && ode.variable != xi)
        throw Error("E_ANSATZ", "ansatz auxiliary variable does not match the ODE variable");

    // move mixed (x,t) coefficients onto (xi, x) or (xi, t)
    Expr lhs = ode.lhs;
    Expr x = make_sym("x"), t = make_sym("t");
    if (xi == "eta")
        lhs = substitute(lhs, {{"t", make_sym("eta") * make_pow(x, make_num(2))}});
    else if (xi == "zeta")
        lhs = substitute(lhs, {{"x", make_sym("zeta") * make_pow(t, make_num(Rational(1, 2)))}});

    // ansatz and its derivatives; z'' is eliminated through the auxiliary
    // equation, which covers reciprocal powers via the quotient rule
    Expr z = make_sym("z"), zp = make_sym("z'");
    std::vector<Expr> terms;
    for (size_t i = 0; i < ansatz.powers.size(); ++i)
        terms.push_back(make_sym(ansatz.coeffs[i]) * make_pow(z, make_num(ansatz.powers[i])));
    Expr U = make_add(terms);
    Expr Uz = diff(U, "z");
    Expr Uzz = diff(Uz, "z");
    Expr alpha = ratfunc_to_expr(ansatz.aux.alpha);
    Expr beta = ratfunc_to_expr(ansatz.aux.beta);
    Expr Up = Uz * zp;
    Expr Upp = Uzz * make_pow(zp, make_num(2)) + Uz * (alpha * zp + beta * z);

    Expr sub = expand(substitute(lhs, {{"U", U}, {"U'", Up}, {"U''", Upp}}));
    int mz = min_exponent_of(sub, "z");
    if (mz < 0) sub = expand(sub * make_pow(z, make_num(-mz)));

    auto parts = collect(sub, {"z", "z'"});

    AlgebraicSystem sys;
    std::set<std::string> symbols;
    std::vector<std::pair<MultiPoly, std::string>> eqs;
    for (const auto& [mono, coeff] : parts) {
        MultiPoly num = coeff.num().primitive();
        if (num.is_zero()) continue;
        eqs.emplace_back(num, mono_label(mono, {"z", "z'"}));
    }

    if (mode == SolveMode::Strict) {
        // split each coefficient per monomial in the similarity/space symbols
        std::vector<std::pair<MultiPoly, std::string>> split;
        std::vector<std::string> geom = {xi, "x", "t"};
        for (const auto& [eq, label] : eqs) {
            std::map<ExpVec, MultiPoly, LexDesc> buckets;
            std::vector<int> geo_idx(eq.vars().size(), -1);
            for (size_t i = 0; i < eq.vars().size(); ++i) {
                auto it = std::find(geom.begin(), geom.end(), eq.vars()[i]);
                if (it != geom.end()) geo_idx[i] = 1;
            }
            for (const auto& [e, c] : eq.terms()) {
                ExpVec key(e.size(), 0);
                ExpVec rest = e;
                for (size_t i = 0; i < e.size(); ++i)
                    if (geo_idx[i] == 1) { key[i] = e[i]; rest[i] = 0; }
                MultiPoly m;
                m = m.remap(eq.vars());
                m.add_term(rest, c);
                auto it = buckets.find(key);
                if (it == buckets.end()) buckets.emplace(key, m);
                else it->second = it->second + m;
            }
            for (const auto& [key, sub_eq] : buckets) {
                if (sub_eq.is_zero()) continue;
                split.emplace_back(sub_eq.primitive(),
                                   label + " @ " + mono_label(key, eq.vars()));
            }
        }
        // drop duplicates
        eqs.clear();
        std::set<std::string> seen;
        for (auto& [eq, label] : split) {
            std::string sig = eq.str();
            if (seen.insert(sig).second) eqs.emplace_back(eq, label);
        }
    }

    for (auto& [eq, label] : eqs) {
        sys.equations.push_back(eq);
        sys.origin.push_back(label);
        for (const auto& v : eq.vars())
            if (eq.depends_on(v)) symbols.insert(v);
    }

    sys.unknowns.assign(ansatz.coeffs.rbegin(), ansatz.coeffs.rend()); // top first
    if (mode == SolveMode::Paper && symbols.count("p")) sys.unknowns.push_back("p");
    for (const auto& s : symbols)
        if (std::find(sys.unknowns.begin(), sys.unknowns.end(), s) == sys.unknowns.end())
            sys.parameters.push_back(s);
    return sys;
}

RatFunc apply_assignments(const MultiPoly& eq,
                          const std::map<std::string, RatFunc>& assign) {
    RatFunc r{eq};
    for (size_t round = 0; round <= assign.size(); ++round) {
        bool touched = false;
        for (const auto& [v, val] : assign) {
            if (r.num().depends_on(v) || r.den().depends_on(v)) {
                r = r.substitute(v, val);
                touched = true;
            }
        }
        if (!touched) return r;
    }
    throw Error("E_INTERNAL", "cyclic assignment chain");
}

bool branch_zeroes(const SolutionBranch& b, const AlgebraicSystem& sys,
                   const std::vector<int>& which) {
    for (int i : which) {
        RatFunc r = apply_assignments(sys.equations[static_cast<size_t>(i)], b.assignments);
        if (!r.is_zero()) return false;
    }
    return true;
}

namespace {

std::vector<std::string> branch_frees(const AlgebraicSystem& sys, SolveMode mode,
                                      const std::map<std::string, RatFunc>& assign) {
    std::vector<std::string> free;
    for (const auto& u : sys.unknowns)
        if (!assign.count(u)) free.push_back(u);
    free.push_back("C1");
    free.push_back("C2");
    if (mode == SolveMode::Paper &&
        std::find(sys.parameters.begin(), sys.parameters.end(), "n") != sys.parameters.end())
        free.push_back("n");
    std::sort(free.begin(), free.end());
    return free;
}

std::string assign_signature(const std::map<std::string, RatFunc>& assign) {
    std::ostringstream os;
    for (const auto& [k, v] : assign) os << k << "=" << v.str() << ";";
    return os.str();
}

void finalize_chains(std::map<std::string, RatFunc>& assign) {
    // resolve assignment values so they reference free symbols only
    for (size_t round = 0; round <= assign.size(); ++round) {
        bool touched = false;
        for (auto& [k, v] : assign) {
            for (const auto& [k2, v2] : assign) {
                if (k2 == k) continue;
                if (v.num().depends_on(k2) || v.den().depends_on(k2)) {
                    v = v.substitute(k2, v2);
                    touched = true;
                }
            }
        }
        if (!touched) return;
    }
}

// ------------------------------------------------------------- paper mode

struct PaperEngine {
    const AlgebraicSystem& sys;
    std::string top;
    std::vector<SolutionBranch> out;
    std::set<std::string> seen;

    explicit PaperEngine(const AlgebraicSystem& s) : sys(s), top(s.unknowns.front()) {}

    struct EqView {
        bool zero = false;
        RatFunc reduced;
        std::vector<std::string> mono_unknowns; // unknowns appearing in every term
        bool pure_monomial = false;             // reduced = K-element * unknown monomial
        bool involves_top = false;
        MultiPoly cofactor;                     // reduced numerator / monomial part
    };

    EqView view(size_t idx, const std::map<std::string, RatFunc>& assign) const {
        EqView v;
        RatFunc r = apply_assignments(sys.equations[idx], assign);
        v.reduced = r;
        if (r.is_zero()) { v.zero = true; return v; }
        MultiPoly num = r.num().primitive();
        // per-unknown minimum exponent = factorable monomial part
        MultiPoly cof = num;
        for (const auto& u : sys.unknowns) {
            if (assign.count(u) || !num.depends_on(u)) continue;
            int mn = INT_MAX;
            auto it = std::find(num.vars().begin(), num.vars().end(), u);
            size_t ui = static_cast<size_t>(it - num.vars().begin());
            for (const auto& [e, c] : num.terms()) mn = std::min(mn, e[ui]);
            if (mn > 0) {
                v.mono_unknowns.push_back(u);
                cof = cof.div_exact(MultiPoly::var(u, mn));
            }
        }
        v.cofactor = cof;
        bool cof_has_unknown = false;
        for (const auto& u : sys.unknowns)
            if (!assign.count(u) && cof.depends_on(u)) cof_has_unknown = true;
        v.pure_monomial = !cof_has_unknown;
        v.involves_top = !assign.count(top) && num.depends_on(top);
        return v;
    }

    void emit(const std::map<std::string, RatFunc>& assign) {
        if (assign.empty()) return;
        std::map<std::string, RatFunc> final_assign = assign;
        finalize_chains(final_assign);
        std::string sig = assign_signature(final_assign);
        if (!seen.insert(sig).second) return;
        SolutionBranch b;
        b.mode = SolveMode::Paper;
        b.assignments = final_assign;
        for (size_t i = 0; i < sys.equations.size(); ++i) {
            EqView v = view(i, final_assign);
            if (v.zero)
                b.resolved.push_back(static_cast<int>(i));
            else if (v.pure_monomial && v.involves_top)
                b.nontriviality.push_back(static_cast<int>(i));
            else
                b.unresolved.push_back(static_cast<int>(i));
        }
        if (b.resolved.empty()) return;
        b.free_symbols = branch_frees(sys, SolveMode::Paper, final_assign);
        b.verified_exact = branch_zeroes(b, sys, b.resolved);
        out.push_back(std::move(b));
    }

    void explore(std::map<std::string, RatFunc> assign, int depth) {
        emit(assign);
        if (depth >= static_cast<int>(sys.unknowns.size())) return;
        struct Action {
            std::string unknown;
            RatFunc value;
        };
        std::vector<Action> actions;
        auto add_action = [&](const std::string& u, const RatFunc& val) {
            for (const auto& a : actions)
                if (a.unknown == u && a.value == val) return;
            actions.push_back({u, val});
        };
        for (size_t i = 0; i < sys.equations.size(); ++i) {
            EqView v = view(i, assign);
            if (v.zero) continue;
            if (v.pure_monomial) {
                // monomial constraints touching the top coefficient are the
                // nontriviality premise of the series; others pick zeros
                if (v.involves_top) continue;
                for (const auto& u : v.mono_unknowns) add_action(u, RatFunc(Rational(0)));
                continue;
            }
            for (const auto& u : v.mono_unknowns) add_action(u, RatFunc(Rational(0)));
            for (const auto& u : sys.unknowns) {
                if (assign.count(u) || !v.cofactor.depends_on(u)) continue;
                if (v.cofactor.degree(u) != 1) continue;
                // linear solve, coefficient must be unknown-free
                auto cs = [&]() {
                    // cofactor = c1 * u + c0
                    MultiPoly c1, c0;
                    auto it = std::find(v.cofactor.vars().begin(), v.cofactor.vars().end(), u);
                    size_t ui = static_cast<size_t>(it - v.cofactor.vars().begin());
                    for (const auto& [e, c] : v.cofactor.terms()) {
                        ExpVec rest = e;
                        rest[ui] = 0;
                        MultiPoly m;
                        m = m.remap(v.cofactor.vars());
                        m.add_term(rest, c);
                        if (e[ui] == 1) c1 = c1 + m;
                        else c0 = c0 + m;
                    }
                    return std::make_pair(c1, c0);
                }();
                bool c1_clean = true;
                for (const auto& w : sys.unknowns)
                    if (cs.first.depends_on(w)) c1_clean = false;
                if (!c1_clean || cs.first.is_zero()) continue;
                add_action(u, RatFunc(-cs.second, cs.first));
            }
        }
        for (const auto& a : actions) {
            auto next = assign;
            next[a.unknown] = a.value;
            explore(std::move(next), depth + 1);
        }
    }
};

// ------------------------------------------------------------- strict mode

struct StrictEngine {
    const AlgebraicSystem& sys;
    std::vector<SolutionBranch> out;
    std::set<std::string> seen;

    explicit StrictEngine(const AlgebraicSystem& s) : sys(s) {}

    // roots of a poly univariate in v (over the parameter field extended by
    // free unknowns): zero when the variable divides, plus the linear root
    std::vector<RatFunc> rational_roots(const MultiPoly& p, const std::string& v) const {
        std::vector<RatFunc> roots;
        auto it = std::find(p.vars().begin(), p.vars().end(), v);
        if (it == p.vars().end()) return roots;
        size_t vi = static_cast<size_t>(it - p.vars().begin());
        int mn = INT_MAX;
        for (const auto& [e, c] : p.terms()) mn = std::min(mn, e[vi]);
        MultiPoly core = p;
        if (mn > 0) {
            core = p.div_exact(MultiPoly::var(v, mn));
            roots.push_back(RatFunc(Rational(0)));
        }
        if (core.degree(v) == 1) {
            MultiPoly c1, c0;
            auto jt = std::find(core.vars().begin(), core.vars().end(), v);
            size_t ui = static_cast<size_t>(jt - core.vars().begin());
            for (const auto& [e, c] : core.terms()) {
                ExpVec rest = e;
                rest[ui] = 0;
                MultiPoly m;
                m = m.remap(core.vars());
                m.add_term(rest, c);
                if (e[ui] == 1) c1 = c1 + m;
                else c0 = c0 + m;
            }
            if (!c1.is_zero()) roots.push_back(RatFunc(-c0, c1));
        }
        return roots;
    }

    void extract(const std::vector<MultiPoly>& polys, std::vector<std::string> remaining,
                 std::map<std::string, RatFunc> assign) {
        // reduce under current assignments
        std::vector<MultiPoly> reduced;
        for (const auto& p : polys) {
            RatFunc r = apply_assignments(p, assign);
            if (r.is_zero()) continue;
            MultiPoly num = r.num().primitive();
            bool has_remaining = false;
            for (const auto& v : remaining)
                if (num.depends_on(v)) has_remaining = true;
            if (!has_remaining) return; // contradiction: nonzero without unknowns
            reduced.push_back(num);
        }
        if (remaining.empty()) {
            finalize_chains(assign);
            std::string sig = assign_signature(assign);
            if (!seen.insert(sig).second) return;
            SolutionBranch b;
            b.mode = SolveMode::Strict;
            b.assignments = assign;
            for (size_t i = 0; i < sys.equations.size(); ++i)
                b.resolved.push_back(static_cast<int>(i));
            b.verified_exact = branch_zeroes(b, sys, b.resolved);
            if (!b.verified_exact) return;
            b.free_symbols = branch_frees(sys, SolveMode::Strict, assign);
            out.push_back(std::move(b));
            return;
        }
        std::string v = remaining.back(); // least variable first
        std::vector<std::string> rest(remaining.begin(), remaining.end() - 1);
        // constraints depending on v alone among the remaining unknowns
        std::vector<MultiPoly> uni;
        for (const auto& p : reduced) {
            if (!p.depends_on(v)) continue;
            bool pure = true;
            for (const auto& w : rest)
                if (p.depends_on(w)) pure = false;
            if (pure) uni.push_back(p);
        }
        if (uni.empty()) {
            extract(polys, rest, assign); // v stays free
            return;
        }
        // smallest v-degree constraint drives the enumeration
        std::sort(uni.begin(), uni.end(), [&](const MultiPoly& a, const MultiPoly& b) {
            return a.degree(v) < b.degree(v);
        });
        for (const auto& r : rational_roots(uni[0], v)) {
            bool ok = true;
            for (size_t k = 1; k < uni.size() && ok; ++k) {
                std::map<std::string, RatFunc> probe = {{v, r}};
                if (!apply_assignments(uni[k], probe).is_zero()) ok = false;
            }
            if (!ok) continue;
            auto next = assign;
            next[v] = r;
            extract(polys, rest, next);
        }
    }
};

} // namespace

std::vector<SolutionBranch> solve_system(const AlgebraicSystem& sys, SolveMode mode,
                                         unsigned seed) {
    if (sys.equations.empty()) throw Error("E_SYSTEM", "empty algebraic system");
    std::vector<SolutionBranch> branches;
    if (mode == SolveMode::Paper) {
        PaperEngine eng(sys);
        eng.explore({}, 0);
        branches = std::move(eng.out);
    } else {
        std::vector<ParamPoly> gens;
        for (const auto& eq : sys.equations)
            gens.push_back(ParamPoly::from_multipoly(eq, sys.unknowns));
        GroebnerResult gb = groebner_lex(gens);
        if (gb.budget_exceeded) {
            auto roots = solve_numeric(sys.equations, sys.unknowns, seed);
            for (const auto& r : roots) {
                SolutionBranch b;
                b.mode = SolveMode::Strict;
                b.approximate = true;
                b.residual_bound = r.residual;
                for (size_t i = 0; i < sys.unknowns.size(); ++i) {
                    // store a short rational close to the double root
                    Rational approx(static_cast<long>(std::llround(r.point[i] * 1e9)),
                                    1000000000L);
                    b.assignments[sys.unknowns[i]] = RatFunc(approx);
                }
                b.free_symbols = branch_frees(sys, mode, b.assignments);
                branches.push_back(std::move(b));
            }
            return branches;
        }
        std::vector<MultiPoly> basis_polys;
        for (const auto& g : gb.basis) basis_polys.push_back(g.to_multipoly().primitive());
        StrictEngine eng(sys);
        eng.extract(basis_polys, sys.unknowns, {});
        branches = std::move(eng.out);
    }
    std::sort(branches.begin(), branches.end(),
              [](const SolutionBranch& a, const SolutionBranch& b) {
                  if (a.free_symbols.size() != b.free_symbols.size())
                      return a.free_symbols.size() > b.free_symbols.size();
                  return assign_signature(a.assignments) < assign_signature(b.assignments);
              });
    return branches;
}

int balance(const OdeSpec& ode, const FamilyId& aux_id, int n_max) {
    for (int N = 1; N <= n_max; ++N) {
        AnsatzSpec ansatz = make_ansatz(N, false, aux_for_mode(aux_id, SolveMode::Paper));
        AlgebraicSystem sys;
        try {
            sys = substitute_and_collect(ode, ansatz, SolveMode::Paper);
        } catch (const Error&) {
            continue;
        }
        if (sys.equations.empty()) continue;
        for (const auto& b : solve_system(sys, SolveMode::Paper)) {
            auto it = b.assignments.find(ansatz.top_coeff());
            bool top_zero = it != b.assignments.end() && it->second.is_zero();
            if (!top_zero) return N;
        }
    }
    throw Error("E_BALANCE", "no truncation N <= " + std::to_string(n_max) +
                                 " admits a nontrivial branch");
}

std::vector<long> admissible_indices(int m, long lo, long hi) {
    if (m < 1) throw Error("E_INDEX", "index rule needs m >= 1");
    if (lo > hi) throw Error("E_NO_INDEX", "empty candidate range");
    std::set<long> ok_res;
    ok_res.insert(((-1 % m) + m) % m);
    ok_res.insert(0);
    ok_res.insert(((1 % m) + m) % m);
    std::vector<long> pass;
    for (long n = lo; n <= hi; ++n) {
        long r = ((n % m) + m) % m;
        if (ok_res.count(r)) pass.push_back(n);
    }
    if (pass.empty()) throw Error("E_NO_INDEX", "no admissible index in range");
    std::vector<long> ordered;
    for (long pref : {1L, -1L, 0L})
        if (std::find(pass.begin(), pass.end(), pref) != pass.end()) ordered.push_back(pref);
    std::vector<long> rest;
    for (long n : pass)
        if (n != 1 && n != -1 && n != 0) rest.push_back(n);
    std::sort(rest.begin(), rest.end(), [](long a, long b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
        return a < b;
    });
    ordered.insert(ordered.end(), rest.begin(), rest.end());
    return ordered;
}

} // namespace fibaux
