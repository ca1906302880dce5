#include "mdcol/gluing.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace mdcol {

namespace {

// decomposition of the affine chart into axis assignments and signs
struct ChartAxes {
    int axis_u, axis_v;   // which patch axis frame-u / frame-v runs along
    double sign_u, sign_v;
    Vec2 origin;
};

ChartAxes chart_axes(const Dihedral& chart) {
    ChartAxes a;
    auto o = chart(0.0, 0.0);
    auto pu = chart(1.0, 0.0);
    auto pv = chart(0.0, 1.0);
    double dux = pu[0] - o[0], duy = pu[1] - o[1];
    double dvx = pv[0] - o[0], dvy = pv[1] - o[1];
    a.axis_u = std::abs(dux) > 0.5 ? 0 : 1;
    a.sign_u = (a.axis_u == 0 ? dux : duy);
    a.axis_v = std::abs(dvx) > 0.5 ? 0 : 1;
    a.sign_v = (a.axis_v == 0 ? dvx : dvy);
    a.origin = Vec2(o[0], o[1]);
    return a;
}

// d^{(a,b)} of F o chart in edge-frame coordinates at frame point (u, v)
Vec2 frame_partial(const Patch& p, const Dihedral& chart, double u, double v, int a, int b) {
    ChartAxes ax = chart_axes(chart);
    auto xy = chart(u, v);
    int order = a + b;
    GeometryJet J = p.jet(xy[0], xy[1], order);
    int da = 0, db = 0;
    (ax.axis_u == 0 ? da : db) += a;
    (ax.axis_v == 0 ? da : db) += b;
    double sign = std::pow(ax.sign_u, a) * std::pow(ax.sign_v, b);
    return sign * J.at(da, db);
}

std::pair<Vec2, Vec2> frame_derivs(const Patch& p, const Dihedral& chart, double t) {
    return {frame_partial(p, chart, 0.0, t, 1, 0), frame_partial(p, chart, 0.0, t, 0, 1)};
}

double frame_det(const Patch& p, const Dihedral& chart, double t) {
    auto [d1, d2] = frame_derivs(p, chart, t);
    return d1.x() * d2.y() - d1.y() * d2.x();
}

double frame_beta(const Patch& p, const Dihedral& chart, double t) {
    auto [d1, d2] = frame_derivs(p, chart, t);
    return d1.dot(d2) / d2.squaredNorm();
}

LinearFn fit_linear(const std::function<double(double)>& f, const std::string& what,
                    int edge_id) {
    LinearFn lin{f(0.0), f(1.0) - f(0.0)};
    double worst = 0.0;
    for (int i = 0; i <= 20; ++i) {
        double t = i / 20.0;
        worst = std::max(worst, std::abs(f(t) - lin(t)));
    }
    if (worst > 1e-9)
        throw std::runtime_error("inner edge " + std::to_string(edge_id) + ": " + what +
                                 " deviates from a linear function by " + std::to_string(worst) +
                                 "; geometry is not bilinear-like G^s");
    return lin;
}

EdgeFrame make_frame(const MultiPatchDomain& dom, const InnerEdge& edge, Dihedral ca,
                     Dihedral cb, int pa, int pb) {
    EdgeFrame fr;
    fr.patch_a = pa;
    fr.patch_b = pb;
    fr.chart_a = ca;
    fr.chart_b = cb;

    if (frame_det(dom.patch(pa), ca, 0.5) > 0.0) {
        std::swap(fr.patch_a, fr.patch_b);
        std::swap(fr.chart_a, fr.chart_b);
    }

    const Patch& A = dom.patch(fr.patch_a);
    const Patch& B = dom.patch(fr.patch_b);
    LinearFn dA = fit_linear([&](double t) { return frame_det(A, fr.chart_a, t); },
                             "det J on side a", edge.id);
    LinearFn dB = fit_linear([&](double t) { return frame_det(B, fr.chart_b, t); },
                             "det J on side b", edge.id);
    // lambda minimizing ||alpha_a + 1||^2 + ||alpha_b - 1||^2 in L2(0,1)
    double lambda = (dB.integral() - dA.integral()) / (dA.integral_sq() + dB.integral_sq());
    if (!(lambda > 0.0))
        throw std::runtime_error("inner edge " + std::to_string(edge.id) +
                                 ": non-positive gluing scale");
    fr.glue.lambda = lambda;
    fr.glue.alpha_a = {lambda * dA.a0, lambda * dA.a1};
    fr.glue.alpha_b = {lambda * dB.a0, lambda * dB.a1};
    fr.glue.beta_a = fit_linear([&](double t) { return frame_beta(A, fr.chart_a, t); },
                                "beta on side a", edge.id);
    fr.glue.beta_b = fit_linear([&](double t) { return frame_beta(B, fr.chart_b, t); },
                                "beta on side b", edge.id);
    for (double t : {0.0, 0.5, 1.0})
        if (!(fr.glue.alpha_a(t) < 0.0 && fr.glue.alpha_b(t) > 0.0))
            throw std::runtime_error("inner edge " + std::to_string(edge.id) +
                                     ": gluing function signs are inconsistent");
    return fr;
}

} // namespace

EdgeFrame edge_frame(const MultiPatchDomain& dom, const InnerEdge& edge) {
    return make_frame(dom, edge, edge.a.chart(), edge.b.chart(), edge.a.patch, edge.b.patch);
}

EdgeFrame edge_frame_at_vertex(const MultiPatchDomain& dom, const InnerEdge& edge,
                               int vertex_id) {
    if (vertex_id == edge.vertex0) return edge_frame(dom, edge);
    if (vertex_id != edge.vertex1)
        throw std::invalid_argument("edge_frame_at_vertex: vertex not on edge");
    Dihedral flip{false, false, true}; // edge-frame t -> 1 - t
    Dihedral ca = flip.then(edge.a.chart());
    Dihedral cb = flip.then(edge.b.chart());
    return make_frame(dom, edge, ca, cb, edge.a.patch, edge.b.patch);
}

double gs_condition_residual(const MultiPatchDomain& dom, const InnerEdge& edge, int s,
                             int samples) {
    EdgeFrame fr = edge_frame(dom, edge);

    // F_l recursion of the bilinear-like G^s definition; derivatives of the
    // lower F_j along the edge by central differences (diagnostic accuracy)
    struct SideF {
        const Patch& P;
        Dihedral chart;
        LinearFn alpha, beta;
        Vec2 operator()(int l, double t) const {
            Vec2 acc = std::pow(alpha(t), -l) * frame_partial(P, chart, 0.0, t, l, 0);
            for (int j = 0; j < l; ++j) {
                int m = l - j;
                double binom = 1.0;
                for (int r = 0; r < m; ++r) binom = binom * (l - r) / (r + 1);
                const double hstep = 1e-2;
                Vec2 dm = Vec2::Zero();
                for (int w = 0; w <= m; ++w) {
                    double cw = 1.0;
                    for (int r = 0; r < w; ++r) cw = cw * (m - r) / (r + 1);
                    dm += ((m - w) % 2 ? -1.0 : 1.0) * cw *
                          (*this)(j, t + (w - m * 0.5) * hstep);
                }
                dm /= std::pow(hstep, m);
                acc -= binom * std::pow(beta(t) / alpha(t), m) * dm;
            }
            return acc;
        }
    };

    SideF FA{dom.patch(fr.patch_a), fr.chart_a, fr.glue.alpha_a, fr.glue.beta_a};
    SideF FB{dom.patch(fr.patch_b), fr.chart_b, fr.glue.alpha_b, fr.glue.beta_b};
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        double t = 0.1 + 0.8 * i / double(samples - 1);
        for (int l = 0; l <= s; ++l) worst = std::max(worst, (FA(l, t) - FB(l, t)).norm());
    }
    return worst;
}

} // namespace mdcol
