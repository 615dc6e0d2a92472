#ifndef FIBAUX_MULTIPOLY_HPP
#define FIBAUX_MULTIPOLY_HPP

#include "fibaux/rational.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace fibaux {

using ExpVec = std::vector<int>;

// Descending lex on exponent vectors: map iteration starts at the leading
// monomial. Variable order is the declared (alphabetical) order.
struct LexDesc {
    bool operator()(const ExpVec& a, const ExpVec& b) const {
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    }
};

// Multivariate polynomial over Rational. Canonical form: sorted variable
// list, no zero coefficients, fixed lex monomial order.
class MultiPoly {
  public:
    using TermMap = std::map<ExpVec, Rational, LexDesc>;

    MultiPoly() = default;

    static MultiPoly constant(const Rational& c) {
        MultiPoly p;
        if (!c.is_zero()) p.terms_[{}] = c;
        return p;
    }
    static MultiPoly constant(long c) { return constant(Rational(c)); }

    static MultiPoly var(const std::string& name, int exp = 1) {
        MultiPoly p;
        p.vars_ = {name};
        if (exp == 0) return constant(1);
        p.terms_[{exp}] = Rational(1);
        return p;
    }

    const std::vector<std::string>& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && all_zero(terms_.begin()->first));
    }
    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        return terms_.begin()->second;
    }
    size_t term_count() const { return terms_.size(); }

    int degree(const std::string& v) const {
        auto it = std::find(vars_.begin(), vars_.end(), v);
        if (it == vars_.end()) return 0;
        size_t idx = static_cast<size_t>(it - vars_.begin());
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e[idx]);
        return d;
    }

    int total_degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (int x : e) s += x;
            d = std::max(d, s);
        }
        return d;
    }

    bool depends_on(const std::string& v) const { return degree(v) > 0; }

    MultiPoly operator-() const {
        MultiPoly r = *this;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }

    MultiPoly operator+(const MultiPoly& o) const {
        auto [a, b] = aligned(*this, o);
        for (const auto& [e, c] : b.terms_) a.add_term(e, c);
        return a;
    }
    MultiPoly operator-(const MultiPoly& o) const { return *this + (-o); }

    MultiPoly operator*(const MultiPoly& o) const {
        auto [a, b] = aligned(*this, o);
        MultiPoly r;
        r.vars_ = a.vars_;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                ExpVec e(ea.size());
                for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }

    MultiPoly operator*(const Rational& c) const {
        MultiPoly r;
        if (c.is_zero()) return r;
        r = *this;
        for (auto& [e, k] : r.terms_) k = k * c;
        return r;
    }

    bool operator==(const MultiPoly& o) const {
        auto [a, b] = aligned(*this, o);
        return a.terms_ == b.terms_;
    }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    MultiPoly pow(int e) const {
        if (e < 0) throw Error("E_POLY_POW", "negative polynomial power");
        MultiPoly r = constant(1);
        for (int i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    // Partial derivative.
    MultiPoly diff(const std::string& v) const {
        auto it = std::find(vars_.begin(), vars_.end(), v);
        if (it == vars_.end()) return MultiPoly();
        size_t idx = static_cast<size_t>(it - vars_.begin());
        MultiPoly r;
        r.vars_ = vars_;
        for (const auto& [e, c] : terms_) {
            if (e[idx] == 0) continue;
            ExpVec e2 = e;
            e2[idx] -= 1;
            r.add_term(e2, c * Rational(e[idx]));
        }
        return r;
    }

    // Substitute a variable by a polynomial.
    MultiPoly substitute(const std::string& v, const MultiPoly& value) const {
        auto it = std::find(vars_.begin(), vars_.end(), v);
        if (it == vars_.end()) return *this;
        size_t idx = static_cast<size_t>(it - vars_.begin());
        MultiPoly r;
        for (const auto& [e, c] : terms_) {
            MultiPoly term = constant(c);
            for (size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (i == idx)
                    term = term * value.pow(e[i]);
                else
                    term = term * var(vars_[i], e[i]);
            }
            r = r + term;
        }
        return r;
    }

    double eval(const std::map<std::string, double>& pt) const {
        double s = 0;
        for (const auto& [e, c] : terms_) {
            double m = c.to_double();
            for (size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                auto it = pt.find(vars_[i]);
                if (it == pt.end())
                    throw Error("E_EVAL", "unbound variable " + vars_[i]);
                m *= std::pow(it->second, e[i]);
            }
            s += m;
        }
        return s;
    }

    // Leading coefficient and monomial under the fixed order.
    Rational leading_coeff() const {
        if (terms_.empty()) return Rational(0);
        return terms_.begin()->second;
    }
    ExpVec leading_exp() const {
        if (terms_.empty()) return ExpVec(vars_.size(), 0);
        return terms_.begin()->first;
    }

    // gcd of all coefficients, sign taken from the leading coefficient.
    Rational content() const {
        if (terms_.empty()) return Rational(0);
        Rational g(0);
        for (const auto& [e, c] : terms_) g = Rational::gcd(g, c);
        if (leading_coeff().is_negative()) g = -g;
        return g;
    }

    // Divide out the content: integer-primitive, positive leading coefficient.
    MultiPoly primitive() const {
        if (terms_.empty()) return *this;
        Rational c = content();
        MultiPoly r = *this;
        for (auto& [e, k] : r.terms_) k = k / c;
        return r;
    }

    // Exact division; throws if the division leaves a remainder.
    MultiPoly div_exact(const MultiPoly& d) const {
        MultiPoly q, r;
        if (!try_divide(d, q, r) || !r.is_zero())
            throw Error("E_POLY_DIV", "inexact polynomial division");
        return q;
    }

    bool divides(const MultiPoly& other) const {
        MultiPoly q, r;
        return other.try_divide(*this, q, r) && r.is_zero();
    }

    // Multivariate division by leading-term elimination (single divisor).
    bool try_divide(const MultiPoly& d, MultiPoly& q, MultiPoly& r) const {
        if (d.is_zero()) return false;
        auto [a, b] = aligned(*this, d);
        q = MultiPoly(); q.vars_ = a.vars_;
        r = MultiPoly(); r.vars_ = a.vars_;
        MultiPoly rem = a;
        ExpVec lb = b.leading_exp();
        Rational cb = b.leading_coeff();
        while (!rem.is_zero()) {
            ExpVec la = rem.leading_exp();
            ExpVec e(la.size());
            bool div = true;
            for (size_t i = 0; i < la.size(); ++i) {
                e[i] = la[i] - lb[i];
                if (e[i] < 0) { div = false; break; }
            }
            if (!div) {
                // move leading term to remainder
                r.add_term(la, rem.leading_coeff());
                rem.terms_.erase(rem.terms_.begin());
                continue;
            }
            Rational c = rem.leading_coeff() / cb;
            q.add_term(e, c);
            MultiPoly m; m.vars_ = a.vars_; m.add_term(e, c);
            rem = rem - m * b;
        }
        return true;
    }

    std::string str() const;

    // Internal: align variable universes of two polynomials.
    static std::pair<MultiPoly, MultiPoly> aligned(const MultiPoly& a, const MultiPoly& b) {
        if (a.vars_ == b.vars_) return {a, b};
        std::vector<std::string> u = a.vars_;
        for (const auto& v : b.vars_)
            if (std::find(u.begin(), u.end(), v) == u.end()) u.push_back(v);
        std::sort(u.begin(), u.end());
        return {a.remap(u), b.remap(u)};
    }

    MultiPoly remap(const std::vector<std::string>& newvars) const {
        MultiPoly r;
        r.vars_ = newvars;
        std::vector<int> pos(vars_.size());
        for (size_t i = 0; i < vars_.size(); ++i) {
            auto it = std::find(newvars.begin(), newvars.end(), vars_[i]);
            pos[i] = static_cast<int>(it - newvars.begin());
        }
        for (const auto& [e, c] : terms_) {
            ExpVec e2(newvars.size(), 0);
            for (size_t i = 0; i < e.size(); ++i) e2[pos[i]] = e[i];
            r.add_term(e2, c);
        }
        return r;
    }

    void add_term(const ExpVec& e, const Rational& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

  private:
    static bool all_zero(const ExpVec& e) {
        for (int x : e) if (x != 0) return false;
        return true;
    }

    std::vector<std::string> vars_; // sorted
    TermMap terms_;
};

// gcd of multivariate polynomials over Q: primitive PRS recursion on the
// first variable both depend on. Result is integer-primitive with positive
// leading coefficient; gcd(0, 0) = 0.
MultiPoly gcd(const MultiPoly& a, const MultiPoly& b);

} // namespace fibaux

#endif
