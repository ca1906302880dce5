#pragma once

#include "mdcol/geometry.hpp"

namespace mdcol {

struct LinearFn {
    double a0 = 0.0, a1 = 0.0;
    double operator()(double t) const { return a0 + a1 * t; }
    double integral() const { return a0 + 0.5 * a1; }
    double integral_sq() const { return a0 * a0 + a0 * a1 + a1 * a1 / 3.0; }
};

/// Gluing data of one inner edge in a concrete edge frame. Side a is the one
/// with negative edge-frame Jacobian determinant, so alpha_a < 0 < alpha_b.
struct GluingData {
    LinearFn alpha_a, alpha_b;
    LinearFn beta_a, beta_b;
    double lambda = 0.0;
};

/// One concrete parameterization of an inner edge: both charts map the edge
/// frame (in which the edge is {0} x [0,1]) into the patch squares, with a
/// common edge parameter t.
struct EdgeFrame {
    int patch_a = -1, patch_b = -1;
    Dihedral chart_a, chart_b;
    GluingData glue;
};

/// Canonical frame of the stored inner edge (t = 0 at edge.vertex0).
EdgeFrame edge_frame(const MultiPatchDomain& dom, const InnerEdge& edge);

/// Frame with the edge parameter starting at the requested vertex.
EdgeFrame edge_frame_at_vertex(const MultiPatchDomain& dom, const InnerEdge& edge,
                               int vertex_id);

/// Residual of the full bilinear-like G^s derivative-matching conditions
/// along the edge (diagnostic; not part of loading).
double gs_condition_residual(const MultiPatchDomain& dom, const InnerEdge& edge, int s,
                             int samples = 21);

} // namespace mdcol
