#pragma once

#include "mdcol/smooth_space.hpp"

namespace mdcol {

enum class SchemeKind { greville, superconvergent, set2, set3 };
enum class ProblemKind { poisson, biharmonic };

enum class PointTag { interior, dirichlet, neumann };

struct CollocationPoint {
    Vec2 x;          // physical position
    int patch = -1;  // owning patch (smallest index containing the point)
    Vec2 zeta;       // local coordinates in the owning patch
    PointTag tag = PointTag::interior;
    Side neumann_side = Side::left; // boundary side carrying the normal
    Vec2 zeta_boundary;             // parametric projection onto that side
};

/// Univariate collocation coordinate tables for one direction: one entry per
/// basis-function index of the plain degree-(s+1) class, the degree-(2s+1)
/// class, and the truncated class.
struct DirectionTables {
    Eigen::VectorXd p1;    // n1 entries
    Eigen::VectorXd p2;    // n2 entries
    Eigen::VectorXd trunc; // n1 entries (valid at truncated indices)
};

DirectionTables greville_tables(int s, int k);
DirectionTables superconvergent_tables(int s, int k);

/// Local collocation points of one patch, one per basis function, in the
/// order of the mixed-space basis.
std::vector<Vec2> local_points(const MixedSpace2D& space, const DirectionTables& tables);

/// Clustered superconvergent points of the maximal-regularity space
/// S^{2s+1-l,2s-l} on [0,1], boundary points included (dim = 2s+2-l+k).
std::vector<double> maxreg_clustered(int s, int k, int level);

/// Per-span reference roots of the maximal-regularity spaces (Table values).
std::vector<double> maxreg_span_roots(int s, int level);

struct PointSet {
    std::vector<CollocationPoint> points;
    int count(PointTag t) const {
        int n = 0;
        for (const CollocationPoint& p : points)
            if (p.tag == t) ++n;
        return n;
    }
    int rows() const { return static_cast<int>(points.size()); }
};

/// Global deduplicated, tagged point set for a scheme/problem combination.
PointSet assemble_points(const SmoothSpace& space, SchemeKind scheme, ProblemKind problem);

const char* tag_name(PointTag t);
const char* scheme_name(SchemeKind s);

} // namespace mdcol
