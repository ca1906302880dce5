#pragma once

#include "mdcol/geometry.hpp"
#include "mdcol/jet.hpp"

namespace mdcol {

/// Jets of the two components of a geometry mapping at a parametric point.
struct GeometryJets {
    Jet2 x, y;
    int order() const { return x.order(); }
};

GeometryJets geometry_jets(const Patch& p, const Vec2& zeta, int order);

/// Jet of the pulled-back physical Laplacian: (1/|det J|) div(N grad v) with
/// N = |det J| J^{-1} J^{-T}. v must carry two more orders than the result.
Jet2 laplace_pullback(const Jet2& v, const GeometryJets& g);

/// Jets of the physical gradient components J^{-T} grad_xi v.
std::array<Jet2, 2> gradient_pullback(const Jet2& v, const GeometryJets& g);

/// Linear functionals on the parametric jet of a field: row(v) = sum over
/// (a,b) of w(a,b) * deriv_{a,b}(v). Extracted by feeding unit jets through
/// the pullback operators, so assembly is a sparse dot product per function.
struct JetFunctional {
    int order = 0;
    Eigen::MatrixXd w; // (order+1) x (order+1), entry (a,b)

    double apply(const Eigen::MatrixXd& derivs) const {
        double r = 0.0;
        for (int a = 0; a <= order; ++a)
            for (int b = 0; a + b <= order; ++b) r += w(a, b) * derivs(a, b);
        return r;
    }
};

/// Functional giving the physical Laplacian of a field at the point.
JetFunctional laplacian_functional(const GeometryJets& g);
/// Functional giving the physical bilaplacian.
JetFunctional bilaplacian_functional(const GeometryJets& g);
/// Functionals for the physical gradient components.
std::array<JetFunctional, 2> gradient_functional(const GeometryJets& g);
/// Functionals for the gradient of the physical Laplacian.
std::array<JetFunctional, 2> laplacian_gradient_functional(const GeometryJets& g);

} // namespace mdcol
