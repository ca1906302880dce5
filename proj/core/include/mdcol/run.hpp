#pragma once

#include <string>
#include <vector>

#include "mdcol/solver.hpp"

namespace mdcol {

struct RunConfig {
    std::string domain = "G"; // built-in name
    std::string geometry_file;
    ProblemKind problem = ProblemKind::poisson;
    SchemeKind scheme = SchemeKind::superconvergent;
    std::vector<int> ks = {7, 15, 31, 63}; // h = 1/(k+1)
    int quad_points = 0;
    unsigned seed = 0;
    bool check_oracles = false;

    int s() const { return problem == ProblemKind::biharmonic ? 4 : 2; }
};

struct SolveRecord {
    int k = 0;
    double h = 0.0;
    int dim = 0, rows = 0, cols = 0;
    bool square = false;
    int rank = 0;
    double residual = 0.0;
    ErrorReport errors;
    double seconds_total = 0.0, seconds_solve = 0.0;
    double oracle_worst = 0.0;
};

MultiPatchDomain load_domain(const RunConfig& cfg);
SolveRecord run_single(const MultiPatchDomain& dom, const RunConfig& cfg, int k);
std::vector<SolveRecord> run_ladder(const MultiPatchDomain& dom, const RunConfig& cfg);

/// pairwise order estimates log2(e_{2h} / e_h) per norm, between consecutive
/// ladder records
std::vector<ErrorReport> pairwise_orders(const std::vector<SolveRecord>& ladder);
/// overall estimate between the first and last record
ErrorReport ladder_orders(const std::vector<SolveRecord>& ladder);

/// worst relative mismatch between the divergence-form operator rows and the
/// inverse-map chain-rule oracle at random interior samples
double oracle_comparison(const SmoothSpace& w, ProblemKind problem, int samples,
                         unsigned seed);

std::string records_csv(const std::vector<SolveRecord>& records, int s);
std::string records_json(const RunConfig& cfg, const std::vector<SolveRecord>& records);
std::string points_csv(const SmoothSpace& w, const PointSet& ps);

} // namespace mdcol
