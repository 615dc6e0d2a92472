#ifndef FIBAUX_RATFUNC_HPP
#define FIBAUX_RATFUNC_HPP

#include "fibaux/multipoly.hpp"

namespace fibaux {

// Quotient of two MultiPoly in canonical form: gcd(num, den) a unit, den
// integer-primitive with positive leading coefficient. Rational content is
// carried by the numerator.
class RatFunc {
  public:
    RatFunc() : num_(), den_(MultiPoly::constant(1)) {}
    RatFunc(MultiPoly n, MultiPoly d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
    explicit RatFunc(MultiPoly n) : num_(std::move(n)), den_(MultiPoly::constant(1)) {}
    explicit RatFunc(const Rational& c)
        : num_(MultiPoly::constant(c)), den_(MultiPoly::constant(1)) {}

    static RatFunc var(const std::string& name) { return RatFunc(MultiPoly::var(name)); }

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }

    RatFunc operator-() const { RatFunc r = *this; r.num_ = -r.num_; return r; }
    RatFunc operator+(const RatFunc& o) const {
        return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    RatFunc operator-(const RatFunc& o) const { return *this + (-o); }
    RatFunc operator*(const RatFunc& o) const {
        return RatFunc(num_ * o.num_, den_ * o.den_);
    }
    RatFunc operator/(const RatFunc& o) const {
        if (o.is_zero()) throw Error("E_DIV0", "rational-function division by zero");
        return RatFunc(num_ * o.den_, den_ * o.num_);
    }
    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    RatFunc pow(int e) const {
        if (e >= 0) return RatFunc(num_.pow(e), den_.pow(e));
        return RatFunc(den_.pow(-e), num_.pow(-e));
    }

    RatFunc diff(const std::string& v) const {
        return RatFunc(num_.diff(v) * den_ - num_ * den_.diff(v), den_ * den_);
    }

    RatFunc substitute(const std::string& v, const RatFunc& value) const {
        // Horner-free direct expansion; fine for the small degrees used here.
        RatFunc r;
        auto expand = [&](const MultiPoly& p) {
            RatFunc acc;
            for (const auto& [e, c] : p.terms()) {
                RatFunc term((Rational(c)));
                for (size_t i = 0; i < e.size(); ++i) {
                    if (e[i] == 0) continue;
                    if (p.vars()[i] == v)
                        term = term * value.pow(e[i]);
                    else
                        term = term * RatFunc(MultiPoly::var(p.vars()[i], e[i]));
                }
                acc = acc + term;
            }
            return acc;
        };
        return expand(num_) / expand(den_);
    }

    double eval(const std::map<std::string, double>& pt) const {
        double d = den_.eval(pt);
        if (d == 0) throw Error("E_EVAL", "rational function pole");
        return num_.eval(pt) / d;
    }

    std::string str() const {
        if (is_polynomial()) {
            Rational c = den_.constant_value();
            if (c.is_one()) return num_.str();
            return "(" + num_.str() + ")/(" + c.str() + ")";
        }
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

  private:
    void normalize() {
        if (den_.is_zero()) throw Error("E_DIV0", "zero denominator in rational function");
        if (num_.is_zero()) { den_ = MultiPoly::constant(1); return; }
        MultiPoly g = gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = num_.div_exact(g);
            den_ = den_.div_exact(g);
        }
        // den primitive with positive lead; rational scale moves to num.
        Rational c = den_.content();
        den_ = den_.primitive();
        num_ = num_ * (Rational(1) / c);
    }

    MultiPoly num_;
    MultiPoly den_;
};

} // namespace fibaux

#endif
