#ifndef FIBAUX_CASEIO_HPP
#define FIBAUX_CASEIO_HPP

#include "fibaux/ansatz.hpp"
#include "fibaux/verify.hpp"

namespace fibaux {

// One figure reproduction: a printed closed form, expression-valued
// parameter bindings, and the documented evaluation window.
struct FigureJob {
    std::string id;
    std::string solution; // key into CaseConfig::printed
    std::map<std::string, Expr> params;
    GridSpec grid;
};

// Bundled configuration for one similarity/auxiliary pairing.
struct CaseConfig {
    std::string label;
    PdeSpec pde;
    SimilarityTransform transform;
    FamilyId family_id; // symbolic index
    bool reciprocal = false;
    long n_lo = -2, n_hi = 4;
    GridSpec screen_grid;
    EvalPoint screen_params;             // numeric defaults for screening
    std::vector<FigureJob> figures;
    std::map<std::string, Expr> printed; // audited closed forms in (x, t)
    std::map<std::string, RatFunc> printed_branch; // published coefficient pins
    std::string comparison_note;
};

CaseConfig load_case(const std::string& path);

std::string branches_to_json(const std::string& label, SolveMode mode,
                             const AlgebraicSystem& sys,
                             const std::vector<SolutionBranch>& branches);

} // namespace fibaux

#endif
