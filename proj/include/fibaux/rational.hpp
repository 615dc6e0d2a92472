#ifndef FIBAUX_RATIONAL_HPP
#define FIBAUX_RATIONAL_HPP

#include <gmpxx.h>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fibaux {

// Error with a short machine-readable code plus human text. The CLI prints
// "error: <code>: <what>" on one line.
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

// Exact rational over arbitrary-precision integers. Always canonical:
// gcd(|num|, den) == 1, den > 0, zero is 0/1. mpq_class does not
// canonicalize on (num, den) construction, so every entry point here does.
class Rational {
  public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(long n, long d) : v_(n, d) { canon(); }
    explicit Rational(const mpq_class& q) : v_(q) { canon(); }
    explicit Rational(const mpz_class& z) : v_(z) {}

    // Parses "a", "-a", or "a/b".
    static Rational parse(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw Error("E_NUMBER", "bad rational literal: " + s);
        Rational r;
        r.v_ = q;
        r.canon();
        return r;
    }

    const mpz_class& num() const { return v_.get_num(); }
    const mpz_class& den() const { return v_.get_den(); }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    bool is_negative() const { return v_ < 0; }

    // Only valid when is_integer() and the value fits in long.
    long to_long() const {
        if (!is_integer() || !v_.get_num().fits_slong_p())
            throw Error("E_RANGE", "rational does not fit in long: " + str());
        return v_.get_num().get_si();
    }

    double to_double() const { return v_.get_d(); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
    Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
    Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
    Rational operator/(const Rational& o) const {
        if (o.is_zero()) throw Error("E_DIV0", "rational division by zero");
        return Rational(mpq_class(v_ / o.v_));
    }
    Rational& operator+=(const Rational& o) { v_ += o.v_; canon(); return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; canon(); return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; canon(); return *this; }

    bool operator==(const Rational& o) const { return v_ == o.v_; }
    bool operator!=(const Rational& o) const { return v_ != o.v_; }
    bool operator<(const Rational& o) const { return v_ < o.v_; }
    bool operator<=(const Rational& o) const { return v_ <= o.v_; }
    bool operator>(const Rational& o) const { return v_ > o.v_; }
    bool operator>=(const Rational& o) const { return v_ >= o.v_; }

    Rational abs() const { return is_negative() ? -*this : *this; }

    // Integer power; negative exponents invert (error on zero base).
    Rational pow(long e) const {
        if (e == 0) return Rational(1);
        if (is_zero()) {
            if (e < 0) throw Error("E_DIV0", "0 raised to negative power");
            return Rational(0);
        }
        mpz_class n, d;
        unsigned long ae = static_cast<unsigned long>(e < 0 ? -e : e);
        mpz_pow_ui(n.get_mpz_t(), num().get_mpz_t(), ae);
        mpz_pow_ui(d.get_mpz_t(), den().get_mpz_t(), ae);
        Rational r;
        if (e > 0)
            r.v_ = mpq_class(n, d);
        else
            r.v_ = mpq_class(d, n);
        r.canon();
        return r;
    }

    std::string str() const { return v_.get_str(); }

    static Rational gcd(const Rational& a, const Rational& b) {
        // gcd of rationals: gcd of numerators over lcm of denominators.
        if (a.is_zero()) return b.abs();
        if (b.is_zero()) return a.abs();
        mpz_class gn, gd, l;
        mpz_gcd(gn.get_mpz_t(), a.num().get_mpz_t(), b.num().get_mpz_t());
        mpz_lcm(gd.get_mpz_t(), a.den().get_mpz_t(), b.den().get_mpz_t());
        Rational r;
        r.v_ = mpq_class(gn, gd);
        r.canon();
        return r;
    }

  private:
    void canon() { v_.canonicalize(); }
    mpq_class v_;
};

inline Rational operator*(long a, const Rational& b) { return Rational(a) * b; }

} // namespace fibaux

#endif
