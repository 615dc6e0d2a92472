#ifndef FIBAUX_EXPR_HPP
#define FIBAUX_EXPR_HPP

#include "fibaux/ratfunc.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace fibaux {

enum class Kind { Num, Sym, Fun, Pow, Mul, Add };

enum class FunTag { Sqrt, Abs, Sign, Sin, Cos, ArcTan, Exp, Log, Hyp2F1 };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

// Immutable expression tree. Sums/products are flattened and sorted, rational
// constants are folded, integer exponents are exact. Construction goes
// through the make_* functions which enforce the canonical form.
class Expr {
  public:
    Expr() = default;
    explicit Expr(ExprPtr p) : p_(std::move(p)) {}

    const ExprNode& node() const { return *p_; }
    const ExprPtr& ptr() const { return p_; }
    bool valid() const { return p_ != nullptr; }

    Kind kind() const;
    bool is_num() const { return kind() == Kind::Num; }
    bool is_zero() const;
    bool is_one() const;
    bool is_integer() const;
    const Rational& num_value() const;
    const std::string& sym_name() const;
    FunTag fun_tag() const;
    bool sqrt_nonneg() const; // declared-real-domain flag on sqrt nodes
    const std::vector<Expr>& children() const;

    bool operator==(const Expr& o) const;
    bool operator!=(const Expr& o) const { return !(*this == o); }

    std::string str() const;  // human-readable infix form
    std::string sexpr() const;

  private:
    ExprPtr p_;
};

struct ExprNode {
    Kind kind;
    Rational value;              // Num
    std::string name;            // Sym
    FunTag tag = FunTag::Sqrt;   // Fun
    bool nonneg = false;         // Fun(Sqrt): argument asserted >= 0
    std::vector<Expr> kids;      // Fun args / Pow(base, exp) / Mul / Add
};

// Canonical constructors.
Expr make_num(const Rational& r);
Expr make_num(long n);
Expr make_sym(const std::string& name);
Expr make_add(std::vector<Expr> children);
Expr make_mul(std::vector<Expr> children);
Expr make_pow(const Expr& base, const Expr& exp);
Expr make_fun(FunTag tag, std::vector<Expr> args, bool nonneg = false);

inline Expr make_sqrt(const Expr& u, bool nonneg = false) {
    return make_fun(FunTag::Sqrt, {u}, nonneg);
}

// Convenience arithmetic.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

// Total canonical order: constants < symbols (alphabetical) < compounds
// (by kind then recursive compare). Returns <0, 0, >0.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

bool is_true_expr(const Expr& e);
bool known_nonneg(const Expr& e);

// Exact symbolic derivative. d/dz hyp2f1(a,b;c;z) = (ab/c) hyp2f1(a+1,b+1;c+1;z);
// a dependence of a/b/c on the variable raises E_UNSUPPORTED_FUN.
Expr diff(const Expr& e, const std::string& sym);

// Simultaneous substitution followed by canonical folding.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

// Distribute products over sums and expand small integer powers of sums.
Expr expand(const Expr& e);

std::set<std::string> free_symbols(const Expr& e);
bool contains_symbol(const Expr& e, const std::string& sym);

// Conversion to the rational-function canonical form. Throws E_NOT_RATIONAL
// on non-polynomial nodes (sqrt, trig, ...).
RatFunc expr_to_ratfunc(const Expr& e);
Expr ratfunc_to_expr(const RatFunc& f);
Expr multipoly_to_expr(const MultiPoly& p);

// Exact decomposition of e as sum of monomials in the basis symbols with
// RatFunc coefficients free of them. E_COLLECT on non-polynomial dependence.
std::map<ExpVec, RatFunc> collect(const Expr& e, const std::vector<std::string>& basis);

// Rebuild sum(monomial * coefficient) from a collect() result.
Expr reconstruct(const std::map<ExpVec, RatFunc>& parts,
                 const std::vector<std::string>& basis);

// Deterministic S-expression serialization, e.g. (mul (sym q) (pow (sym x) 2)).
std::string to_sexpr(const Expr& e);
Expr parse_sexpr(const std::string& text);

} // namespace fibaux

#endif
