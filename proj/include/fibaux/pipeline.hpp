#ifndef FIBAUX_PIPELINE_HPP
#define FIBAUX_PIPELINE_HPP

#include "fibaux/caseio.hpp"

#include <ostream>

namespace fibaux {

struct RunConfig {
    std::string case_path;                    // exactly one of case_path /
    std::string pde_text, transform_text;     // inline pde+transform
    Family family = Family::Fibonacci;
    Variant variant = Variant::EtaForm;
    bool reciprocal = false;
    SolveMode mode = SolveMode::Paper;
    long n_lo = -2, n_hi = 4;
    bool have_range = false;
    GridSpec grid;
    bool have_grid = false;
    std::string out_dir = "out";
    unsigned seed = 1;
};

struct IndexDecision {
    long n = 0;
    bool accepted = false;
    std::string reason; // which test failed, or "accepted"
};

// One reduced/solved case with the screening record.
struct CaseRun {
    CaseConfig cfg;
    OdeSpec ode;
    int balanced_N = 0;
    std::vector<IndexDecision> decisions;
    bool has_selected = false;
    long selected_n = 0;
    AlgebraicSystem system;                 // solved with symbolic index
    std::vector<SolutionBranch> branches;
    std::map<std::string, std::string> comparisons; // pin symbol -> match status
    ResidualReport reference_report;
    bool have_report = false;
};

CaseConfig case_from_config(const RunConfig& rc);

// The decisive index test: strict reading of the congruence rule (|n| <= 1),
// declared ansatz direction, a consistent nontrivial branch, and real
// bounded values of the composed reference solution on the screen window.
IndexDecision screen_index(const CaseConfig& cfg, const OdeSpec& ode, long n,
                           SolveMode mode);

// Composed candidate u(x,t) for a branch at a concrete index: assigned
// coefficients substituted, free coefficients left symbolic, auxiliary
// solution in C1/C2, similarity variable replaced by its (x,t) definition.
Expr compose_branch_solution(const CaseConfig& cfg, const SolutionBranch& branch, long n,
                             SolveMode mode);

CaseRun run_case(const CaseConfig& cfg, SolveMode mode, unsigned seed);

// Deterministic CSV (columns x,t,u,in_domain; t-major; 17 significant
// digits). `params` may bind symbols to expressions in x and t. Returns the
// in-domain fraction; errors when everything is out of domain.
double emit_grid(const Expr& solution, const GridSpec& grid,
                 const std::map<std::string, Expr>& params, std::ostream& os);

// Orchestrators used by the CLI; artifacts land in rc.out_dir.
int run_pipeline(const RunConfig& rc);
int run_plot_data(const RunConfig& rc);

std::string run_report_json(const CaseRun& run);

} // namespace fibaux

#endif
