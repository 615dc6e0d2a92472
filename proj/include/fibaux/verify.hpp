#ifndef FIBAUX_VERIFY_HPP
#define FIBAUX_VERIFY_HPP

#include "fibaux/fiblucas.hpp"
#include "fibaux/reduction.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fibaux {

// Gauss series summed to relative term < 1e-15 (at most 10000 terms);
// the Pfaff transform 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a,c-b;c;z/(z-1)) is
// applied when it improves convergence. Errors: E_2F1_POLE when c is a
// nonpositive integer not rescued by a terminating numerator parameter,
// E_2F1_DOMAIN outside the series+Pfaff region.
double hyp2f1(double a, double b, double c, double z);

using EvalPoint = std::map<std::string, double>;

struct EvalResult {
    bool ok = false;
    double value = 0;
    std::string reason; // offending node when !ok
};

// IEEE double evaluation with domain checks at sqrt/log/pow/hyp2f1 nodes.
// "pi" is bound automatically unless the point overrides it.
EvalResult eval_expr(const Expr& e, const EvalPoint& pt);

struct GridSpec {
    double x0 = 0, x1 = 1;
    int nx = 2;
    double t0 = 0, t1 = 1;
    int nt = 2;
};

struct GridSample {
    double x, t, u, residual;
    bool in_domain;
};

struct ResidualReport {
    std::string case_label;
    std::string solution_id;
    GridSpec grid;
    EvalPoint params;
    double max_abs = 0;
    double mean_abs = 0;
    long total_points = 0;
    long out_of_domain = 0;
    long fd_checked = 0;
    long fd_disagreements = 0; // symbolic vs finite-difference residual > 1e-4 relative
    std::vector<GridSample> samples; // filled when keep_samples
};

// Residual of a candidate u(x,t) in the PDE on a grid. The residual is
// computed symbolically (derivatives of the candidate substituted into the
// jet-form lhs) and cross-checked per point against 4th-order central
// finite differences with step 1e-4 * scale. Out-of-domain points are
// excluded from max/mean. Errors: E_EMPTY_GRID when no point is in domain.
ResidualReport pde_residual_grid(const PdeSpec& pde, const Expr& candidate,
                                 const GridSpec& grid, const EvalPoint& params,
                                 bool keep_samples = false);

// Serial reference implementation; kept independent of the parallel path
// for testing and benchmarking.
ResidualReport pde_residual_grid_serial(const PdeSpec& pde, const Expr& candidate,
                                        const GridSpec& grid, const EvalPoint& params,
                                        bool keep_samples = false);

// Max |z'' - alpha z' - beta z| over the in-domain points. Errors when all
// points are out of domain.
double ode_residual_numeric(const AuxiliaryEquation& ode, const Expr& candidate,
                            const std::vector<EvalPoint>& points);
// Same for a reduced OdeSpec: each point must bind every free symbol.
double ode_residual_numeric(const OdeSpec& ode, const Expr& candidate,
                            const std::vector<EvalPoint>& points);

std::string report_to_json(const ResidualReport& r);
std::string report_samples_csv(const ResidualReport& r); // x,t,u,residual,in_domain

} // namespace fibaux

#endif
