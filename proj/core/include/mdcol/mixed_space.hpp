#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <set>
#include <vector>

#include "mdcol/bspline.hpp"

namespace mdcol {

enum class Side { left = 0, right = 1, bottom = 2, top = 3 };
enum class Corner { bl = 0, br = 1, tl = 2, tr = 3 };

inline bool corner_touches(Corner c, Side s) {
    switch (s) {
        case Side::left: return c == Corner::bl || c == Corner::tl;
        case Side::right: return c == Corner::br || c == Corner::tr;
        case Side::bottom: return c == Corner::bl || c == Corner::br;
        case Side::top: return c == Corner::tl || c == Corner::tr;
    }
    return false;
}

const char* side_name(Side s);
const char* corner_name(Corner c);

/// One of the eight symmetries of [0,1]^2, applied as: swap axes first,
/// then flip u, then flip v.
struct Dihedral {
    bool swap = false;
    bool flip_u = false;
    bool flip_v = false;

    std::array<double, 2> operator()(double u, double v) const {
        if (swap) std::swap(u, v);
        return {flip_u ? 1.0 - u : u, flip_v ? 1.0 - v : v};
    }
    Side map(Side s) const;
    Corner map(Corner c) const;
    Dihedral inverse() const;
    Dihedral then(const Dihedral& g) const; // first *this, then g
    static const std::array<Dihedral, 8>& all();
    bool operator==(const Dihedral& o) const {
        return swap == o.swap && flip_u == o.flip_u && flip_v == o.flip_v;
    }
};

struct EdgeFlags {
    std::set<Side> inner;
    std::set<Corner> valency1; // corners mapped to boundary vertices of patch valency one
};

enum class BasisClass { S1, S1bar, S2 };

struct Factor {
    int degree_class = 0; // 0 -> degree s+1, 1 -> degree 2s+1
    int index = 0;
    bool trunc_left = false;
    bool trunc_right = false;
};

struct MixedBasisFunction {
    BasisClass cls = BasisClass::S1;
    Factor u, v;
    // set for the corner-block truncated functions introduced when a corner
    // free of inner edges has patch valency > 1: the (s+1)^2 coefficient
    // block at that corner of [0,1]^2 is zeroed out of the tensor product
    std::optional<Corner> corner_trunc;
};

/// Transport of a basis function through a symmetry of the square.
MixedBasisFunction map_mixed_function(const MixedBasisFunction& f, const Dihedral& g, int n1,
                                      int n2);

/// The mixed degree underlying spline space on [0,1]^2 for one patch: degree
/// s+1 functions with vanishing order-s jets on the sides marked inner,
/// degree 2s+1 functions near those sides, glued by truncated B-splines.
class MixedSpace2D {
public:
    MixedSpace2D(int s, int k, EdgeFlags flags);

    int s() const { return s_; }
    int k() const { return k_; }
    const EdgeFlags& flags() const { return flags_; }
    const UnivariateSpace& space_p1() const { return sp1_; }
    const UnivariateSpace& space_p2() const { return sp2_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<MixedBasisFunction>& basis() const { return basis_; }

    /// Closed-form dimension; E inner edges, V valency-one corners.
    static int dimension(int s, int k, int E, int V);

    /// Exact degree-(2s+1) representation of a univariate factor.
    Eigen::VectorXd factor_p2(const Factor& f) const;

    /// Values of all basis functions at (x,y) for derivative orders
    /// (d1,d2) with d1,d2 <= max_deriv; column index d1*(max_deriv+1)+d2.
    Eigen::MatrixXd eval(double x, double y, int max_deriv) const;

private:
    void enumerate();

    int s_, k_;
    EdgeFlags flags_;
    UnivariateSpace sp1_, sp2_;
    std::vector<MixedBasisFunction> basis_;
    Eigen::MatrixXd p1_in_p2_; // row j = coefficients of N^{p1}_j in the p2 space
};

} // namespace mdcol
