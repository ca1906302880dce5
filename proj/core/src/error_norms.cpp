#include <cmath>

#include "mdcol/quadrature.hpp"
#include "mdcol/solver.hpp"

namespace mdcol {

ErrorReport error_norms(const SpaceEvaluator& ev, const Eigen::VectorXd& c,
                        const ManufacturedSolution& sol, int quad_points) {
    const SmoothSpace& w = ev.space();
    const MultiPatchDomain& dom = w.domain();
    const int s = w.s();
    const int q = quad_points > 0 ? quad_points : w.space_p2().degree() + 2;
    const int ne = w.k() + 1;
    const int nd = (s >= 4) ? 4 : 2;
    GaussRule rule = gauss_rule(q);

    std::vector<Eigen::MatrixXd> grids = ev.contract(c);

    double num[5] = {0, 0, 0, 0, 0};
    double den[5] = {0, 0, 0, 0, 0};

    for (int patch = 0; patch < dom.num_patches(); ++patch) {
        for (int eu = 0; eu < ne; ++eu)
            for (int ev2 = 0; ev2 < ne; ++ev2)
                for (int i = 0; i < q; ++i)
                    for (int j = 0; j < q; ++j) {
                        Vec2 zeta((eu + rule.x[i]) / ne, (ev2 + rule.x[j]) / ne);
                        double wq = rule.w[i] * rule.w[j] / (ne * ne);
                        GeometryJets g = geometry_jets(dom.patch(patch), zeta, nd);
                        double detj = std::abs(g.x.dx().value() * g.y.dy().value() -
                                               g.x.dy().value() * g.y.dx().value());
                        double meas = wq * detj;
                        Vec2 x = dom.patch(patch).eval(zeta.x(), zeta.y());

                        Eigen::MatrixXd d = ev.eval_field(grids[patch], zeta, nd);
                        Jet2 v = Jet2::from_derivs(d, nd);

                        double uh = v.value();
                        double u = sol.u(x);
                        num[0] += meas * (uh - u) * (uh - u);
                        den[0] += meas * u * u;

                        auto gradh = gradient_pullback(v, g);
                        Vec2 gu = sol.grad_u(x);
                        Vec2 dg(gradh[0].value() - gu.x(), gradh[1].value() - gu.y());
                        num[1] += meas * dg.squaredNorm();
                        den[1] += meas * gu.squaredNorm();

                        Jet2 lap = laplace_pullback(v, g);
                        double lu = sol.laplace_u(x);
                        num[2] += meas * (lap.value() - lu) * (lap.value() - lu);
                        den[2] += meas * lu * lu;

                        if (s >= 4) {
                            auto glap = gradient_pullback(lap, g);
                            Vec2 glu = sol.grad_laplace_u(x);
                            Vec2 dgl(glap[0].value() - glu.x(), glap[1].value() - glu.y());
                            num[3] += meas * dgl.squaredNorm();
                            den[3] += meas * glu.squaredNorm();

                            Jet2 bil = laplace_pullback(lap, g);
                            double bu = sol.bilaplace_u(x);
                            num[4] += meas * (bil.value() - bu) * (bil.value() - bu);
                            den[4] += meas * bu * bu;
                        }
                    }
    }

    ErrorReport r;
    r.l2 = std::sqrt(num[0] / den[0]);
    r.h1 = std::sqrt(num[1] / den[1]);
    r.h2 = std::sqrt(num[2] / den[2]);
    if (s >= 4) {
        r.h3 = std::sqrt(num[3] / den[3]);
        r.h4 = std::sqrt(num[4] / den[4]);
    }
    return r;
}

} // namespace mdcol
