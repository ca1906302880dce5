#include "mdcol/pullback.hpp"

#include <cmath>
#include <stdexcept>

namespace mdcol {

GeometryJets geometry_jets(const Patch& p, const Vec2& zeta, int order) {
    GeometryJet d = p.jet(zeta.x(), zeta.y(), order);
    Eigen::MatrixXd dx(order + 1, order + 1), dy(order + 1, order + 1);
    for (int a = 0; a <= order; ++a)
        for (int b = 0; b <= order; ++b) {
            dx(a, b) = d.at(a, b).x();
            dy(a, b) = d.at(a, b).y();
        }
    GeometryJets g;
    g.x = Jet2::from_derivs(dx, order);
    g.y = Jet2::from_derivs(dy, order);
    return g;
}

Jet2 laplace_pullback(const Jet2& v, const GeometryJets& g) {
    // Jacobian entries as jets one order below the geometry jets
    Jet2 j11 = g.x.dx(), j12 = g.x.dy();
    Jet2 j21 = g.y.dx(), j22 = g.y.dy();
    Jet2 det = j11 * j22 - j12 * j21;
    double sign = det.value() > 0.0 ? 1.0 : -1.0;
    if (det.value() == 0.0) throw std::domain_error("laplace_pullback: singular Jacobian");
    Jet2 absdet = det * sign;
    Jet2 inv_absdet = absdet.reciprocal();
    // N = adj(J) adj(J)^T / |det J|
    // adj(J) = [ j22 -j12 ; -j21 j11 ]
    Jet2 n11 = (j22 * j22 + j12 * j12) * inv_absdet;
    Jet2 n12 = (j22 * (j21 * -1.0) + (j12 * -1.0) * j11) * inv_absdet;
    Jet2 n22 = (j21 * j21 + j11 * j11) * inv_absdet;
    Jet2 v1 = v.dx(), v2 = v.dy();
    Jet2 q1 = n11 * v1 + n12 * v2;
    Jet2 q2 = n12 * v1 + n22 * v2;
    return (q1.dx() + q2.dy()) * inv_absdet;
}

std::array<Jet2, 2> gradient_pullback(const Jet2& v, const GeometryJets& g) {
    Jet2 j11 = g.x.dx(), j12 = g.x.dy();
    Jet2 j21 = g.y.dx(), j22 = g.y.dy();
    Jet2 det = j11 * j22 - j12 * j21;
    if (det.value() == 0.0) throw std::domain_error("gradient_pullback: singular Jacobian");
    Jet2 inv_det = det.reciprocal();
    Jet2 v1 = v.dx(), v2 = v.dy();
    // J^{-T} = (1/det) [ j22 -j21 ; -j12 j11 ]
    return {(j22 * v1 - j21 * v2) * inv_det, (j11 * v2 - j12 * v1) * inv_det};
}

namespace {

template <class Op>
JetFunctional extract(int order, Op&& op) {
    JetFunctional f;
    f.order = order;
    f.w.setZero(order + 1, order + 1);
    double fact_a = 1.0;
    for (int a = 0; a <= order; ++a) {
        double fact_b = 1.0;
        for (int b = 0; a + b <= order; ++b) {
            Jet2 unit(order);
            unit.at(a, b) = 1.0;
            // operators act on Taylor coefficients; weights convert to the
            // derivative values used by the assembly
            f.w(a, b) = op(unit) / (fact_a * fact_b);
            fact_b *= (b + 1);
        }
        fact_a *= (a + 1);
    }
    return f;
}

} // namespace

JetFunctional laplacian_functional(const GeometryJets& g) {
    return extract(2, [&](const Jet2& v) { return laplace_pullback(v, g).value(); });
}

JetFunctional bilaplacian_functional(const GeometryJets& g) {
    return extract(4, [&](const Jet2& v) {
        Jet2 w = laplace_pullback(v, g);
        return laplace_pullback(w, g).value();
    });
}

std::array<JetFunctional, 2> gradient_functional(const GeometryJets& g) {
    JetFunctional fx = extract(1, [&](const Jet2& v) { return gradient_pullback(v, g)[0].value(); });
    JetFunctional fy = extract(1, [&](const Jet2& v) { return gradient_pullback(v, g)[1].value(); });
    return {fx, fy};
}

std::array<JetFunctional, 2> laplacian_gradient_functional(const GeometryJets& g) {
    JetFunctional fx = extract(3, [&](const Jet2& v) {
        return gradient_pullback(laplace_pullback(v, g), g)[0].value();
    });
    JetFunctional fy = extract(3, [&](const Jet2& v) {
        return gradient_pullback(laplace_pullback(v, g), g)[1].value();
    });
    return {fx, fy};
}

} // namespace mdcol
