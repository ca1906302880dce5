#include "mdcol/physical_oracle.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace mdcol {

namespace {

// v composed with a pair of jets with vanishing constant term
Jet2 substitute(const Jet2& v, const Jet2& gx, const Jet2& gy) {
    const int m = std::min({v.order(), gx.order(), gy.order()});
    Jet2 out = Jet2::constant(0.0, m);
    // powers of gx and gy, built incrementally
    std::vector<Jet2> px(m + 1, Jet2::constant(1.0, m)), py(m + 1, Jet2::constant(1.0, m));
    for (int i = 1; i <= m; ++i) {
        px[i] = px[i - 1] * gx;
        py[i] = py[i - 1] * gy;
    }
    for (int a = 0; a <= m; ++a)
        for (int b = 0; a + b <= m; ++b) {
            double c = v.at(a, b);
            if (c == 0.0) continue;
            out += (px[a] * py[b]) * c;
        }
    return out;
}

} // namespace

Jet2 physical_jet_by_inverse(const Jet2& v, const GeometryJets& g) {
    const int m = v.order();
    // relative expansions of the mapping (constant terms removed)
    Jet2 X = g.x.truncated(m);
    Jet2 Y = g.y.truncated(m);
    X.at(0, 0) = 0.0;
    Y.at(0, 0) = 0.0;

    Eigen::Matrix2d J;
    J << X.at(1, 0), X.at(0, 1), Y.at(1, 0), Y.at(0, 1);
    if (J.determinant() == 0.0)
        throw std::domain_error("physical_jet_by_inverse: singular Jacobian");
    Eigen::Matrix2d Ji = J.inverse();

    // fixed point H <- H - J^{-1} (F(H) - id), quadratically convergent
    Jet2 hx(m), hy(m);
    hx.at(1, 0) = Ji(0, 0);
    hx.at(0, 1) = Ji(0, 1);
    hy.at(1, 0) = Ji(1, 0);
    hy.at(0, 1) = Ji(1, 1);
    Jet2 idx(m), idy(m);
    idx.at(1, 0) = 1.0;
    idy.at(0, 1) = 1.0;
    for (int it = 0; it < m; ++it) {
        Jet2 dx = substitute(X, hx, hy) - idx;
        Jet2 dy = substitute(Y, hx, hy) - idy;
        hx -= (dx * Ji(0, 0) + dy * Ji(0, 1));
        hy -= (dx * Ji(1, 0) + dy * Ji(1, 1));
    }
    return substitute(v, hx, hy);
}

double laplacian_by_inverse(const Jet2& v, const GeometryJets& g) {
    Jet2 p = physical_jet_by_inverse(v, g);
    return 2.0 * (p.at(2, 0) + p.at(0, 2));
}

double bilaplacian_by_inverse(const Jet2& v, const GeometryJets& g) {
    Jet2 p = physical_jet_by_inverse(v, g);
    // u_xxxx + 2 u_xxyy + u_yyyy from Taylor coefficients
    return 24.0 * p.at(4, 0) + 8.0 * p.at(2, 2) + 24.0 * p.at(0, 4);
}

} // namespace mdcol
