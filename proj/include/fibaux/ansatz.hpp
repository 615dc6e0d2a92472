#ifndef FIBAUX_ANSATZ_HPP
#define FIBAUX_ANSATZ_HPP

#include "fibaux/fiblucas.hpp"
#include "fibaux/groebner.hpp"
#include "fibaux/reduction.hpp"

namespace fibaux {

// strict: unknowns are solved in the parameter field, equations split per
// power of the similarity variable. paper: the similarity variable (and the
// surviving space/time symbol) is adjoined to the parameter field, and the
// solver follows the permissive branch-generation procedure that reproduces
// the published coefficient tables.
enum class SolveMode { Strict, Paper };

inline std::string mode_name(SolveMode m) { return m == SolveMode::Strict ? "strict" : "paper"; }

// Finite-series ansatz U = sum_i coeffs[i] * z^powers[i] over a solved
// auxiliary equation for z.
struct AnsatzSpec {
    int N = 1;
    std::vector<int> powers;
    std::vector<std::string> coeffs;
    AuxiliaryEquation aux;

    const std::string& top_coeff() const { return coeffs.back(); }
};

// powers [0..N] (direct) or [0,-1..-N] (reciprocal); coeffs g0,g1,... /
// g0,gm1,...
AnsatzSpec make_ansatz(int N, bool reciprocal, AuxiliaryEquation aux);

// Auxiliary equation used by a solve mode. Paper mode replaces the eta-form
// leading polynomial eta(1+4eta) by eta(1+eta); the fundamental system of
// that companion is the hypergeometric pair in w = 1+eta which the composed
// solutions use. Zeta forms are identical in both modes.
AuxiliaryEquation aux_for_mode(const FamilyId& id, SolveMode mode);

// General solution of the eta-form companion equation as C1*y1 + C2*y2 with
// the hypergeometric pair in w = 1 + eta.
Expr eta_shifted_general_solution(const FamilyId& id, const Expr& c1, const Expr& c2);

// General z(xi) for composing candidate solutions under a given mode.
Expr general_aux_solution(const FamilyId& id, SolveMode mode, const Expr& c1, const Expr& c2);

struct AlgebraicSystem {
    std::vector<std::string> unknowns;   // solve order: top coefficient first
    std::vector<std::string> parameters; // every other symbol
    std::vector<MultiPoly> equations;    // collected-coefficient numerators
    std::vector<std::string> origin;     // z-monomial each equation came from
};

struct SolutionBranch {
    SolveMode mode = SolveMode::Paper;
    std::map<std::string, RatFunc> assignments;
    std::vector<std::string> free_symbols;
    bool verified_exact = false;
    bool approximate = false;
    double residual_bound = 0;
    std::vector<int> resolved;       // equation indices zeroed by the branch
    std::vector<int> unresolved;     // nonzero leftovers (paper mode only)
    std::vector<int> nontriviality;  // monomial constraints on the top coefficient
};

// Substitute the ansatz into the reduced ODE, eliminate z'' through the
// auxiliary equation (including reciprocal powers), clear negative z powers,
// and collect coefficients of the z^i z'^j monomials. In strict mode each
// coefficient is further split per monomial in (xi, x, t).
AlgebraicSystem substitute_and_collect(const OdeSpec& ode, const AnsatzSpec& ansatz,
                                       SolveMode mode);

// Branch solving. Strict mode: lex Groebner elimination and rational-root
// extraction over the parameter field; every returned branch zeroes every
// equation. Paper mode: sequential pivoting that skips monomial constraints
// on the top coefficient; each branch records which equations it resolves
// and which stay open. Both verify by exact back-substitution.
std::vector<SolutionBranch> solve_system(const AlgebraicSystem& sys, SolveMode mode,
                                         unsigned seed = 1);

// Smallest N >= 1 whose collected system admits a branch that keeps the top
// coefficient nonzero (paper-mode solving is used for the admission test).
// E_BALANCE when no N <= n_max works.
int balance(const OdeSpec& ode, const FamilyId& aux_id, int n_max = 3);

// Literal congruence filter n = {-1, 0, 1} (mod m) over [lo, hi], ordered
// 1, -1, 0, then by (|n|, n). E_NO_INDEX when empty.
std::vector<long> admissible_indices(int m, long lo, long hi);

// Exact back-substitution of a branch into selected equations.
bool branch_zeroes(const SolutionBranch& b, const AlgebraicSystem& sys,
                   const std::vector<int>& which);

RatFunc apply_assignments(const MultiPoly& eq,
                          const std::map<std::string, RatFunc>& assign);

} // namespace fibaux

#endif
