#include "fibaux/groebner.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace fibaux {

ParamPoly ParamPoly::from_multipoly(const MultiPoly& p,
                                    const std::vector<std::string>& unknowns) {
    ParamPoly out(unknowns);
    for (const auto& [e, c] : p.terms()) {
        ExpVec mono(unknowns.size(), 0);
        MultiPoly coeff = MultiPoly::constant(c);
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            const std::string& v = p.vars()[i];
            auto it = std::find(unknowns.begin(), unknowns.end(), v);
            if (it != unknowns.end())
                mono[static_cast<size_t>(it - unknowns.begin())] += e[i];
            else
                coeff = coeff * MultiPoly::var(v, e[i]);
        }
        out.add_term(mono, RatFunc(coeff));
    }
    return out;
}

void ParamPoly::add_term(const ExpVec& e, const RatFunc& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

ExpVec ParamPoly::lead_exp() const {
    if (terms_.empty()) return ExpVec(unknowns_.size(), 0);
    return terms_.begin()->first;
}

const RatFunc& ParamPoly::lead_coeff() const {
    if (terms_.empty()) throw Error("E_INTERNAL", "lead_coeff of zero polynomial");
    return terms_.begin()->second;
}

ParamPoly ParamPoly::monic() const {
    if (terms_.empty()) return *this;
    ParamPoly r(unknowns_);
    RatFunc lc = lead_coeff();
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, c / lc);
    return r;
}

ParamPoly ParamPoly::operator+(const ParamPoly& o) const {
    ParamPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

ParamPoly ParamPoly::operator-(const ParamPoly& o) const {
    ParamPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, RatFunc(Rational(-1)) * c);
    return r;
}

ParamPoly ParamPoly::times(const RatFunc& c, const ExpVec& mono) const {
    ParamPoly r(unknowns_);
    for (const auto& [e, k] : terms_) {
        ExpVec e2(e.size());
        for (size_t i = 0; i < e.size(); ++i) e2[i] = e[i] + mono[i];
        r.add_term(e2, k * c);
    }
    return r;
}

MultiPoly ParamPoly::to_multipoly() const {
    MultiPoly acc;
    MultiPoly den_acc = MultiPoly::constant(1);
    // common denominator then numerator; used for exact checks only
    for (const auto& [e, c] : terms_) den_acc = den_acc * c.den();
    for (const auto& [e, c] : terms_) {
        MultiPoly t = c.num() * den_acc.div_exact(c.den());
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) t = t * MultiPoly::var(unknowns_[i], e[i]);
        acc = acc + t;
    }
    return acc;
}

std::string ParamPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) os << "*" << unknowns_[i] << "^" << e[i];
    }
    return os.str();
}

namespace {

bool divides_mono(const ExpVec& a, const ExpVec& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

ExpVec mono_sub(const ExpVec& a, const ExpVec& b) {
    ExpVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

ExpVec mono_lcm(const ExpVec& a, const ExpVec& b) {
    ExpVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

bool coprime(const ExpVec& a, const ExpVec& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > 0 && b[i] > 0) return false;
    return true;
}

} // namespace

ParamPoly normal_form(const ParamPoly& p, const std::vector<ParamPoly>& basis) {
    ParamPoly rem(p.unknowns());
    ParamPoly cur = p;
    while (!cur.is_zero()) {
        ExpVec le = cur.lead_exp();
        bool reduced = false;
        for (const auto& g : basis) {
            if (g.is_zero()) continue;
            if (divides_mono(g.lead_exp(), le)) {
                RatFunc f = cur.lead_coeff() / g.lead_coeff();
                cur = cur - g.times(f, mono_sub(le, g.lead_exp()));
                reduced = true;
                break;
            }
        }
        if (!reduced) {
            rem.add_term(le, cur.lead_coeff());
            ParamPoly lead_only(p.unknowns());
            lead_only.add_term(le, cur.lead_coeff());
            cur = cur - lead_only;
        }
    }
    return rem;
}

GroebnerResult groebner_lex(const std::vector<ParamPoly>& gens, long budget) {
    GroebnerResult res;
    std::vector<ParamPoly> basis;
    for (const auto& g : gens)
        if (!g.is_zero()) basis.push_back(g.monic());
    if (basis.empty()) return res;

    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = i + 1; j < basis.size(); ++j) pairs.emplace_back(i, j);

    while (!pairs.empty()) {
        auto [i, j] = pairs.back();
        pairs.pop_back();
        if (coprime(basis[i].lead_exp(), basis[j].lead_exp())) continue;
        if (++res.reductions > budget) {
            res.budget_exceeded = true;
            return res;
        }
        ExpVec l = mono_lcm(basis[i].lead_exp(), basis[j].lead_exp());
        ParamPoly s = basis[i].times(RatFunc(Rational(1)), mono_sub(l, basis[i].lead_exp())) -
                      basis[j].times(RatFunc(Rational(1)), mono_sub(l, basis[j].lead_exp()));
        ParamPoly r = normal_form(s, basis);
        if (r.is_zero()) continue;
        r = r.monic();
        for (size_t k = 0; k < basis.size(); ++k) pairs.emplace_back(k, basis.size());
        basis.push_back(r);
    }

    // inter-reduce: drop elements whose lead is divisible by another lead,
    // then fully reduce each against the others
    std::vector<ParamPoly> minimal;
    for (size_t i = 0; i < basis.size(); ++i) {
        bool redundant = false;
        for (size_t j = 0; j < basis.size(); ++j) {
            if (i == j) continue;
            if (divides_mono(basis[j].lead_exp(), basis[i].lead_exp())) {
                if (basis[j].lead_exp() == basis[i].lead_exp() && j > i) continue;
                redundant = true;
                break;
            }
        }
        if (!redundant) minimal.push_back(basis[i]);
    }
    std::vector<ParamPoly> reduced;
    for (size_t i = 0; i < minimal.size(); ++i) {
        std::vector<ParamPoly> others;
        for (size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        ParamPoly r = normal_form(minimal[i], others);
        if (!r.is_zero()) reduced.push_back(r.monic());
    }
    std::sort(reduced.begin(), reduced.end(), [](const ParamPoly& a, const ParamPoly& b) {
        return LexDesc{}(b.lead_exp(), a.lead_exp()); // ascending leads
    });
    res.basis = std::move(reduced);
    return res;
}

std::vector<NumericRoot> solve_numeric(const std::vector<MultiPoly>& equations,
                                       const std::vector<std::string>& unknowns,
                                       unsigned seed) {
    const size_t k = unknowns.size();
    for (const auto& eq : equations)
        for (const auto& v : eq.vars())
            if (eq.depends_on(v) &&
                std::find(unknowns.begin(), unknowns.end(), v) == unknowns.end())
                throw Error("E_FALLBACK",
                            "numeric fallback needs parameter-free equations (found " + v + ")");

    auto eval_F = [&](const std::vector<double>& x, std::vector<double>& F) {
        std::map<std::string, double> pt;
        for (size_t i = 0; i < k; ++i) pt[unknowns[i]] = x[i];
        F.resize(equations.size());
        for (size_t e = 0; e < equations.size(); ++e) F[e] = equations[e].eval(pt);
    };
    std::vector<std::vector<MultiPoly>> jac(equations.size());
    for (size_t e = 0; e < equations.size(); ++e)
        for (const auto& u : unknowns) jac[e].push_back(equations[e].diff(u));

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> box(-5.0, 5.0);
    std::vector<NumericRoot> roots;
    for (int start = 0; start < 64; ++start) {
        std::vector<double> x(k);
        for (auto& v : x) v = box(rng);
        bool converged = false;
        for (int iter = 0; iter < 80; ++iter) {
            std::vector<double> F;
            eval_F(x, F);
            double fn = 0;
            for (double f : F) fn = std::max(fn, std::abs(f));
            if (fn < 1e-12) { converged = true; break; }
            // Gauss-Newton step: solve (J^T J) d = -J^T F
            std::map<std::string, double> pt;
            for (size_t i = 0; i < k; ++i) pt[unknowns[i]] = x[i];
            std::vector<std::vector<double>> J(equations.size(), std::vector<double>(k));
            for (size_t e = 0; e < equations.size(); ++e)
                for (size_t i = 0; i < k; ++i) J[e][i] = jac[e][i].eval(pt);
            std::vector<std::vector<double>> A(k, std::vector<double>(k, 0));
            std::vector<double> b(k, 0);
            for (size_t i = 0; i < k; ++i) {
                for (size_t j = 0; j < k; ++j)
                    for (size_t e = 0; e < equations.size(); ++e)
                        A[i][j] += J[e][i] * J[e][j];
                for (size_t e = 0; e < equations.size(); ++e) b[i] -= J[e][i] * F[e];
                A[i][i] += 1e-12; // damping
            }
            // Gaussian elimination
            std::vector<double> d(k, 0);
            for (size_t col = 0; col < k; ++col) {
                size_t piv = col;
                for (size_t r = col + 1; r < k; ++r)
                    if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
                std::swap(A[col], A[piv]);
                std::swap(b[col], b[piv]);
                if (std::abs(A[col][col]) < 1e-300) { b[col] = 0; A[col][col] = 1; }
                for (size_t r = col + 1; r < k; ++r) {
                    double f = A[r][col] / A[col][col];
                    for (size_t c = col; c < k; ++c) A[r][c] -= f * A[col][c];
                    b[r] -= f * b[col];
                }
            }
            for (size_t col = k; col-- > 0;) {
                double s = b[col];
                for (size_t c = col + 1; c < k; ++c) s -= A[col][c] * d[c];
                d[col] = s / A[col][col];
            }
            // damped update
            double step = 1.0;
            std::vector<double> Fn;
            for (int h = 0; h < 12; ++h) {
                std::vector<double> xn(k);
                for (size_t i = 0; i < k; ++i) xn[i] = x[i] + step * d[i];
                eval_F(xn, Fn);
                double fnn = 0;
                for (double f : Fn) fnn = std::max(fnn, std::abs(f));
                if (fnn < fn || fnn < 1e-12) { x = xn; break; }
                step *= 0.5;
                if (h == 11) x = xn;
            }
        }
        if (!converged) {
            std::vector<double> F;
            eval_F(x, F);
            double fn = 0;
            for (double f : F) fn = std::max(fn, std::abs(f));
            if (fn >= 1e-12) continue;
        }
        std::vector<double> F;
        eval_F(x, F);
        double fn = 0;
        for (double f : F) fn = std::max(fn, std::abs(f));
        bool dup = false;
        for (const auto& r : roots) {
            double d = 0;
            for (size_t i = 0; i < k; ++i) d = std::max(d, std::abs(r.point[i] - x[i]));
            if (d < 1e-8) { dup = true; break; }
        }
        if (!dup) roots.push_back({x, fn});
    }
    std::sort(roots.begin(), roots.end(), [](const NumericRoot& a, const NumericRoot& b) {
        return a.point < b.point;
    });
    return roots;
}

} // namespace fibaux
