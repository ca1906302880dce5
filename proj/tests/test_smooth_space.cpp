#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mdcol/smooth_space.hpp"
#include "support/oracles.hpp"

using namespace mdcol;

TEST_CASE("dimension of the smooth space over the L-shape domain") {
    MultiPatchDomain g = builtin_domain("G");

    SUBCASE("s = 2") {
        CHECK(SmoothSpace(g, 2, 15).dim() == 744);
        CHECK(SmoothSpace(g, 2, 31).dim() == 2488);
        CHECK(SmoothSpace(g, 2, 63).dim() == 9048);
    }
    SUBCASE("s = 4") {
        CHECK(SmoothSpace(g, 4, 15).dim() == 955);
        CHECK(SmoothSpace(g, 4, 31).dim() == 2859);
        CHECK(SmoothSpace(g, 4, 63).dim() == 9739);
    }
}

TEST_CASE("subspace breakdown for the L-shape, s = 2, k = 15") {
    MultiPatchDomain g = builtin_domain("G");
    SmoothSpace w(g, 2, 15);
    auto b = w.breakdown();
    CHECK(b["patch"] == 2 * 195);
    CHECK(b["inner_edge"] == 36);
    CHECK(b["boundary_edge"] == 2 * 33 + 4 * 39);
    CHECK(b["vertex"] == 2 * 18 + 4 * 15);
}

TEST_CASE("one-patch domain uses the full underlying space") {
    MultiPatchDomain a = builtin_domain("A");
    SmoothSpace w(a, 2, 8);
    CHECK(w.dim() == 424);
    CHECK(w.breakdown()["patch"] == 424);
}

namespace {

// evaluate a random member of the space on both sides of an inner edge and
// compare physical derivative jets up to order s (chain rule through each
// patch parameterization)
void check_cs_jumps(const MultiPatchDomain& dom, int s, int k, int n_members, int n_points,
                    double tol) {
    SmoothSpace w(dom, s, k);
    std::mt19937 rng(91);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::uniform_real_distribution<double> T(0.05, 0.95);

    for (const InnerEdge& e : dom.inner_edges()) {
        const EdgeFrame& fr = w.stored_edge_frame(e.id);
        for (int mem = 0; mem < n_members; ++mem) {
            Eigen::VectorXd c(w.dim());
            for (int i = 0; i < c.size(); ++i) c[i] = U(rng);

            for (int q = 0; q < n_points; ++q) {
                double t = T(rng);
                // physical points slightly inside each patch along the normal
                auto eval_side = [&](int patch, const Dihedral& chart, double eps) {
                    auto xy = chart(eps, t);
                    // physical derivatives of u_h on this patch at (x, y)
                    GeometryJet gj = dom.patch(patch).jet(xy[0], xy[1], 1);
                    Eigen::Matrix2d J;
                    J.col(0) = gj.at(1, 0);
                    J.col(1) = gj.at(0, 1);
                    Eigen::MatrixXd pd = Eigen::MatrixXd::Zero(3, 3);
                    for (int i = 0; i < w.dim(); ++i) {
                        if (c[i] == 0.0) continue;
                        pd += c[i] * w.eval_function(i, patch, xy[0], xy[1], 2);
                    }
                    struct Out {
                        double v;
                        Eigen::Vector2d grad;
                        Eigen::Matrix2d hess;
                        Vec2 x;
                    } o;
                    o.v = pd(0, 0);
                    Eigen::Vector2d gpar(pd(1, 0), pd(0, 1));
                    o.grad = J.transpose().fullPivLu().solve(gpar);
                    // physical Hessian from parametric second derivatives
                    // (bilinear or spline geometry: include曲 second jets)
                    GeometryJet gj2 = dom.patch(patch).jet(xy[0], xy[1], 2);
                    Eigen::Matrix2d Hpar;
                    Hpar(0, 0) = pd(2, 0);
                    Hpar(0, 1) = Hpar(1, 0) = pd(1, 1);
                    Hpar(1, 1) = pd(0, 2);
                    // subtract grad . second derivatives of F
                    Eigen::Matrix2d Hcorr;
                    Hcorr(0, 0) = o.grad.dot(gj2.at(2, 0));
                    Hcorr(0, 1) = Hcorr(1, 0) = o.grad.dot(gj2.at(1, 1));
                    Hcorr(1, 1) = o.grad.dot(gj2.at(0, 2));
                    Eigen::Matrix2d Hx = Hpar - Hcorr;
                    Eigen::Matrix2d Ji = J.inverse();
                    o.hess = Ji.transpose() * Hx * Ji;
                    o.x = dom.patch(patch).eval(xy[0], xy[1]);
                    return o;
                };
                auto oa = eval_side(fr.patch_a, fr.chart_a, 0.0);
                auto ob = eval_side(fr.patch_b, fr.chart_b, 0.0);
                REQUIRE((oa.x - ob.x).norm() <= 1e-12);
                double scale = std::max({1.0, std::abs(oa.v), oa.grad.norm(),
                                         oa.hess.norm()});
                CHECK(std::abs(oa.v - ob.v) <= tol * scale);
                CHECK((oa.grad - ob.grad).norm() <= tol * scale);
                if (s >= 2)
                    CHECK((oa.hess - ob.hess).norm() <= tol * scale);
            }
        }
    }
}

} // namespace

TEST_CASE("C^s smoothness across inner edges") {
    check_cs_jumps(builtin_domain("G"), 2, 15, 10, 5, 1e-7);
    check_cs_jumps(builtin_domain("B"), 2, 15, 6, 4, 1e-7);
    check_cs_jumps(builtin_domain("C"), 2, 15, 4, 3, 1e-7);
}

TEST_CASE("nesting sanity: stored coefficients reproduce the defining formulas") {
    // tensor-product members: evaluate the stored representation against the
    // product of univariate factors for a patch-subspace function
    MultiPatchDomain g = builtin_domain("G");
    SmoothSpace w(g, 2, 15);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const UnivariateSpace& p2 = w.space_p2();
    int checked = 0;
    for (const SmoothBasisFunction& f : w.basis()) {
        if (f.origin != Origin::patch || f.id % 37 != 0) continue;
        const PatchSupport& ps = f.supports[0];
        REQUIRE(ps.separable);
        for (int it = 0; it < 5; ++it) {
            double x = U(rng), y = U(rng);
            double ref_u = 0.0, ref_v = 0.0;
            Eigen::VectorXd bu = p2.eval_basis(x, 0).row(0);
            Eigen::VectorXd bv = p2.eval_basis(y, 0).row(0);
            for (std::size_t i = 0; i < ps.uf.idx.size(); ++i)
                ref_u += ps.uf.val[i] * bu[ps.uf.idx[i]];
            for (std::size_t i = 0; i < ps.vf.idx.size(); ++i)
                ref_v += ps.vf.val[i] * bv[ps.vf.idx[i]];
            double got = w.eval_function(f.id, ps.patch, x, y, 0)(0, 0);
            CHECK(std::abs(got - ref_u * ref_v) <= 1e-12);
        }
        ++checked;
    }
    CHECK(checked > 3);
}

TEST_CASE("vertex constraint residuals vanish at every vertex function") {
    for (const char* name : {"B", "C"}) {
        MultiPatchDomain dom = builtin_domain(name);
        const int s = 2, k = 15;
        SmoothSpace w(dom, s, k);
        for (const Vertex& v : dom.vertices()) {
            if (v.valency() < 3) continue;
            for (const SmoothBasisFunction& f : w.basis()) {
                if (f.origin != Origin::vertex || f.origin_id != v.id) continue;
                // all physical-corner derivative jets agree between every pair
                // of patches around the vertex (order <= s mixed corner jets
                // of the pullbacks match by Eq.-(11) construction)
                // residual check: cross-patch value/derivative agreement at
                // the vertex through each patch chart
                std::vector<Eigen::MatrixXd> jets;
                for (const VertexFanEntry& fe : v.fan) {
                    auto corner_xy = fe.chart(0.0, 0.0);
                    Eigen::MatrixXd d =
                        w.eval_function(f.id, fe.patch, corner_xy[0], corner_xy[1], 0);
                    jets.push_back(d);
                }
                for (std::size_t i = 1; i < jets.size(); ++i)
                    CHECK(std::abs(jets[i](0, 0) - jets[0](0, 0)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("direct sum: scattered evaluation matrix has full column rank") {
    MultiPatchDomain dom = builtin_domain("B");
    const int s = 2, k = 8;
    SmoothSpace w(dom, s, k);
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> U(0.05, 0.95);
    // scattered but stratified: a jittered grid per patch so every element
    // carries samples
    const int rows = 2 * w.dim();
    const int per_patch = rows / dom.num_patches();
    const int grid = static_cast<int>(std::ceil(std::sqrt(per_patch)));
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dom.num_patches() * grid * grid, w.dim());
    int r = 0;
    for (int patch = 0; patch < dom.num_patches(); ++patch)
        for (int a = 0; a < grid; ++a)
            for (int b = 0; b < grid; ++b) {
                double x = (a + U(rng)) / grid, y = (b + U(rng)) / grid;
                for (int i = 0; i < w.dim(); ++i)
                    A(r, i) = w.eval_function(i, patch, x, y, 0)(0, 0);
                ++r;
            }
    A.conservativeResize(r, Eigen::NoChange);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-10 * sv[0]) ++rank;
    CHECK(rank == w.dim());
}

TEST_CASE("degenerate mesh sizes are rejected") {
    MultiPatchDomain g = builtin_domain("G");
    CHECK_THROWS_AS(SmoothSpace(g, 2, 4), std::invalid_argument);
    CHECK_THROWS_AS(SmoothSpace(g, 4, 8), std::invalid_argument);
}
