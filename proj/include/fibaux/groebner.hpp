#ifndef FIBAUX_GROEBNER_HPP
#define FIBAUX_GROEBNER_HPP

#include "fibaux/ratfunc.hpp"

#include <optional>
#include <vector>

namespace fibaux {

// Polynomial in a designated list of unknowns over the field of rational
// functions in every other symbol. Monomial order: lex on the unknown list
// (first unknown is the largest).
class ParamPoly {
  public:
    explicit ParamPoly(std::vector<std::string> unknowns)
        : unknowns_(std::move(unknowns)) {}

    static ParamPoly from_multipoly(const MultiPoly& p,
                                    const std::vector<std::string>& unknowns);

    const std::vector<std::string>& unknowns() const { return unknowns_; }
    const std::map<ExpVec, RatFunc, LexDesc>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    ExpVec lead_exp() const;
    const RatFunc& lead_coeff() const;
    ParamPoly monic() const;

    ParamPoly operator+(const ParamPoly& o) const;
    ParamPoly operator-(const ParamPoly& o) const;
    // multiply by coefficient * monomial
    ParamPoly times(const RatFunc& c, const ExpVec& mono) const;

    void add_term(const ExpVec& e, const RatFunc& c);

    MultiPoly to_multipoly() const;
    std::string str() const;

  private:
    std::vector<std::string> unknowns_;
    std::map<ExpVec, RatFunc, LexDesc> terms_;
};

struct GroebnerResult {
    std::vector<ParamPoly> basis;  // reduced, monic, sorted by leading monomial
    bool budget_exceeded = false;
    long reductions = 0;
};

// Buchberger with lex order and full inter-reduction. `budget` caps the
// number of S-polynomial reductions; exceeding it sets budget_exceeded (the
// caller falls back to the numeric path).
GroebnerResult groebner_lex(const std::vector<ParamPoly>& gens, long budget = 500);

// Remainder of p modulo the basis (full reduction of every term).
ParamPoly normal_form(const ParamPoly& p, const std::vector<ParamPoly>& basis);

// Damped multi-start Newton for parameter-free systems: 64 starts in
// [-5,5]^k, tolerance 1e-12, dedup radius 1e-8.
struct NumericRoot {
    std::vector<double> point;
    double residual = 0;
};
std::vector<NumericRoot> solve_numeric(const std::vector<MultiPoly>& equations,
                                       const std::vector<std::string>& unknowns,
                                       unsigned seed);

} // namespace fibaux

#endif
