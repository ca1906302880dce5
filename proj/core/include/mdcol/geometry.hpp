#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mdcol/bspline.hpp"
#include "mdcol/mixed_space.hpp"
#include "mdcol/rational.hpp"

namespace mdcol {

using Vec2 = Eigen::Vector2d;

/// All partial derivatives d^{(a,b)} F with a,b <= order at one point.
struct GeometryJet {
    int order = 0;
    std::vector<Vec2> d;
    const Vec2& at(int a, int b) const { return d[a * (order + 1) + b]; }
    Vec2& at(int a, int b) { return d[a * (order + 1) + b]; }
};

/// A tensor-product spline geometry mapping of one patch. Bilinear patches
/// are the degree-1 special case. Control points are kept as exact rationals
/// next to their double mirrors.
class Patch {
public:
    static Patch bilinear(const std::array<Vec2R, 4>& corners); // c00, c10, c01, c11
    static Patch spline(int degree, int regularity, int inner_knots, std::vector<Vec2R> net);

    bool is_bilinear() const { return su_.degree() == 1; }
    const UnivariateSpace& space_u() const { return su_; }
    const UnivariateSpace& space_v() const { return sv_; }
    int net_rows() const { return su_.dim(); }
    int net_cols() const { return sv_.dim(); }
    const Vec2R& control(int a, int b) const { return net_[a * sv_.dim() + b]; }

    Vec2 eval(double x, double y) const;
    Eigen::Matrix2d jacobian(double x, double y) const;
    GeometryJet jet(double x, double y, int order) const;

    Vec2R corner(Corner c) const;
    /// Control points along one side, in that side's natural parameter order.
    std::vector<Vec2R> side_controls(Side s) const;

private:
    Patch(UnivariateSpace su, UnivariateSpace sv, std::vector<Vec2R> net);
    UnivariateSpace su_, sv_;
    std::vector<Vec2R> net_;
    std::vector<Vec2> net_d_;
};

/// Dihedral chart of one side of an inner or boundary edge: maps the edge
/// frame, in which the edge is {0} x [0,1], onto the patch parameter square.
Dihedral side_chart(Side s, bool reversed);

struct EdgeEnd {
    int patch = -1;
    Side side = Side::left;
    bool reversed = false;
    Dihedral chart() const { return side_chart(side, reversed); }
};

struct InnerEdge {
    int id = -1;
    // end a is the side with negative edge-frame Jacobian determinant (the
    // "i0" role in the gluing construction), end b the positive one
    EdgeEnd a, b;
    int vertex0 = -1, vertex1 = -1; // vertices at edge parameter 0 and 1
};

struct BoundaryEdge {
    int id = -1;
    EdgeEnd owner;
    int vertex0 = -1, vertex1 = -1;
};

struct VertexFanEntry {
    int patch = -1;
    Corner corner = Corner::bl;
    // chart: vertex frame -> patch frame; vertex at (0,0), the fan-preceding
    // edge along the bottom, the fan-following edge along the left side
    Dihedral chart;
    int prev_edge = -1; // inner edge ids, -1 for a boundary edge slot
    int next_edge = -1;
};

struct Vertex {
    int id = -1;
    Vec2 pos;
    bool boundary = true;
    std::vector<VertexFanEntry> fan;
    int valency() const { return static_cast<int>(fan.size()); }
};

struct InnerEdgeSpec {
    int patch_a;
    Side side_a;
    int patch_b;
    Side side_b;
    bool reversed;
};

class MultiPatchDomain {
public:
    /// Build the full topology. When specs is empty the inner edges are
    /// detected by exact comparison of side control polygons.
    static MultiPatchDomain build(std::vector<Patch> patches,
                                  const std::vector<InnerEdgeSpec>& specs = {},
                                  std::string name = "");

    const std::string& name() const { return name_; }
    int num_patches() const { return static_cast<int>(patches_.size()); }
    const Patch& patch(int i) const { return patches_[i]; }
    const std::vector<Patch>& patches() const { return patches_; }
    const std::vector<InnerEdge>& inner_edges() const { return inner_edges_; }
    const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }
    const std::vector<Vertex>& vertices() const { return vertices_; }

    /// Inner sides and valency-one corners of a patch, for the underlying
    /// mixed degree space.
    EdgeFlags patch_flags(int i) const;
    bool side_is_inner(int patch, Side s) const;
    double diameter() const { return diameter_; }

private:
    std::string name_;
    std::vector<Patch> patches_;
    std::vector<InnerEdge> inner_edges_;
    std::vector<BoundaryEdge> boundary_edges_;
    std::vector<Vertex> vertices_;
    double diameter_ = 0.0;
};

/// Built-in benchmark domains. Names: A (bilinear quad), B (three-patch),
/// C (five-patch paper plane), D (biquadratic one-patch), F (five-patch
/// screw knob star, biquintic), G (two-patch L-shape). Domain E requires an
/// external control net file.
MultiPatchDomain builtin_domain(const std::string& name);

/// Geometry file round trip (schema documented in the README).
MultiPatchDomain load_geometry(const std::string& path);
void save_geometry(const MultiPatchDomain& domain, const std::string& path);

} // namespace mdcol
