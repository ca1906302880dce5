#include "mdcol/solver.hpp"

#include <Eigen/SPQRSupport>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

namespace mdcol {

ManufacturedSolution ManufacturedSolution::cos_sin() {
    ManufacturedSolution m;
    m.u = [](const Vec2& x) { return std::cos(x.x()) * std::sin(x.y()); };
    m.grad_u = [](const Vec2& x) {
        return Vec2(-std::sin(x.x()) * std::sin(x.y()), std::cos(x.x()) * std::cos(x.y()));
    };
    m.laplace_u = [](const Vec2& x) { return -2.0 * std::cos(x.x()) * std::sin(x.y()); };
    m.grad_laplace_u = [](const Vec2& x) {
        return Vec2(2.0 * std::sin(x.x()) * std::sin(x.y()),
                    -2.0 * std::cos(x.x()) * std::cos(x.y()));
    };
    m.bilaplace_u = [](const Vec2& x) { return 4.0 * std::cos(x.x()) * std::sin(x.y()); };
    return m;
}

SpaceEvaluator::SpaceEvaluator(const SmoothSpace& w) : w_(&w) {
    const int n2 = w.space_p2().dim();
    cells_.assign(w.domain().num_patches(), {});
    for (auto& c : cells_) c.assign(static_cast<std::size_t>(n2) * n2, {});
    for (const SmoothBasisFunction& f : w.basis())
        for (const PatchSupport& ps : f.supports)
            ps.for_each_entry([&](int a, int b, double v) {
                cells_[ps.patch][a * n2 + b].push_back({f.id, v});
            });
    scratch_.assign(w.dim(), Eigen::MatrixXd());
}

std::vector<Eigen::MatrixXd> SpaceEvaluator::contract(const Eigen::VectorXd& c) const {
    const int n2 = w_->space_p2().dim();
    std::vector<Eigen::MatrixXd> grids(w_->domain().num_patches(),
                                       Eigen::MatrixXd::Zero(n2, n2));
    for (const SmoothBasisFunction& f : w_->basis()) {
        double ci = c[f.id];
        if (ci == 0.0) continue;
        for (const PatchSupport& ps : f.supports)
            ps.for_each_entry([&](int a, int b, double v) { grids[ps.patch](a, b) += ci * v; });
    }
    return grids;
}

Eigen::MatrixXd SpaceEvaluator::eval_field(const Eigen::MatrixXd& grid, const Vec2& zeta,
                                           int nd) const {
    const UnivariateSpace& sp2 = w_->space_p2();
    Eigen::MatrixXd Nu, Nv;
    int fu = 0, fv = 0;
    sp2.eval_active(zeta.x(), nd, Nu, fu);
    sp2.eval_active(zeta.y(), nd, Nv, fv);
    const int wdt = sp2.degree() + 1;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nd + 1, nd + 1);
    for (int i = 0; i < wdt; ++i)
        for (int j = 0; j < wdt; ++j) {
            double g = grid(fu + i, fv + j);
            if (g == 0.0) continue;
            for (int a = 0; a <= nd; ++a)
                for (int b = 0; b <= nd; ++b) out(a, b) += g * Nu(a, i) * Nv(b, j);
        }
    return out;
}

namespace {

Vec2 outward_normal(const MultiPatchDomain& dom, int patch, Side side, const Vec2& zeta) {
    Eigen::Matrix2d J = dom.patch(patch).jacobian(zeta.x(), zeta.y());
    // inward parametric direction
    Vec2 in;
    switch (side) {
        case Side::left: in = Vec2(1, 0); break;
        case Side::right: in = Vec2(-1, 0); break;
        case Side::bottom: in = Vec2(0, 1); break;
        case Side::top: in = Vec2(0, -1); break;
    }
    Vec2 tangent = (side == Side::left || side == Side::right) ? Vec2(J.col(1)) : Vec2(J.col(0));
    Vec2 n(tangent.y(), -tangent.x());
    Vec2 w_in = J * in;
    if (n.dot(w_in) > 0.0) n = -n;
    return n.normalized();
}

} // namespace

CollocationSystem assemble(const SpaceEvaluator& ev, const PointSet& points,
                           const ManufacturedSolution& sol, ProblemKind problem) {
    const SmoothSpace& w = ev.space();
    const MultiPatchDomain& dom = w.domain();
    CollocationSystem sys;
    const int rows = points.rows();
    sys.A.resize(rows, w.dim());
    sys.b.resize(rows);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(rows) * 60);

    const int pde_order = (problem == ProblemKind::biharmonic) ? 4 : 2;
    // boundary equations are scaled to the strength of the differential rows,
    // which otherwise dominate the least-squares functional by h^{-order}
    const double h = w.h();
    const double dirichlet_scale = std::pow(h, -pde_order / 2.0 - 1.0);
    const double neumann_scale = std::pow(h, -pde_order / 2.0);

    for (int r = 0; r < rows; ++r) {
        const CollocationPoint& cp = points.points[r];
        JetFunctional fun;
        Vec2 normal = Vec2::Zero();
        Vec2 zeta = cp.zeta;
        switch (cp.tag) {
            case PointTag::interior: {
                GeometryJets g = geometry_jets(dom.patch(cp.patch), zeta, pde_order);
                fun = (problem == ProblemKind::biharmonic) ? bilaplacian_functional(g)
                                                           : laplacian_functional(g);
                sys.b[r] = (problem == ProblemKind::biharmonic) ? sol.bilaplace_u(cp.x)
                                                                : sol.laplace_u(cp.x);
                break;
            }
            case PointTag::dirichlet: {
                fun.order = 0;
                fun.w = dirichlet_scale * Eigen::MatrixXd::Ones(1, 1);
                sys.b[r] = dirichlet_scale * sol.u(cp.x);
                break;
            }
            case PointTag::neumann: {
                zeta = cp.zeta_boundary;
                GeometryJets g = geometry_jets(dom.patch(cp.patch), zeta, 1);
                auto grad = gradient_functional(g);
                normal = outward_normal(dom, cp.patch, cp.neumann_side, zeta);
                fun.order = 1;
                fun.w = neumann_scale * (normal.x() * grad[0].w + normal.y() * grad[1].w);
                Vec2 xb = dom.patch(cp.patch).eval(zeta.x(), zeta.y());
                sys.b[r] = neumann_scale * normal.dot(sol.grad_u(xb));
                break;
            }
        }
        ev.for_each_function(cp.patch, zeta, fun.order,
                             [&](int fid, const Eigen::MatrixXd& derivs) {
                                 double v = fun.apply(derivs);
                                 if (v != 0.0) trip.emplace_back(r, fid, v);
                             });
    }
    sys.A.setFromTriplets(trip.begin(), trip.end());
    return sys;
}

Eigen::VectorXd solve(const CollocationSystem& sys, SolveInfo* info) {
    SolveInfo local;
    local.rows = static_cast<int>(sys.A.rows());
    local.cols = static_cast<int>(sys.A.cols());
    local.square = sys.square();

    // column equilibration keeps the factorizations away from the h^{-2s}
    // scale spread of the derivative rows
    Eigen::VectorXd cscale = Eigen::VectorXd::Ones(sys.A.cols());
    for (int c = 0; c < sys.A.outerSize(); ++c) {
        double m = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, c); it; ++it)
            m = std::max(m, std::abs(it.value()));
        if (m > 0.0) cscale[c] = 1.0 / m;
    }
    Eigen::SparseMatrix<double> A = sys.A * cscale.asDiagonal();

    Eigen::VectorXd x;
    if (sys.square()) {
        // extended precision: the square systems carry the h^{-2s} conditioning
        // of the strong-form rows, and the highest error norms sit right at the
        // double-precision floor otherwise
        using SpLd = Eigen::SparseMatrix<long double>;
        SpLd Ald = A.cast<long double>();
        Eigen::SparseLU<SpLd> lu;
        lu.analyzePattern(Ald);
        lu.factorize(Ald);
        if (lu.info() != Eigen::Success)
            throw std::runtime_error("square collocation system is singular");
        Eigen::Matrix<long double, Eigen::Dynamic, 1> bld = sys.b.cast<long double>();
        Eigen::Matrix<long double, Eigen::Dynamic, 1> xld = lu.solve(bld);
        xld += lu.solve(bld - Ald * xld);
        x = xld.cast<double>();
        local.rank = local.cols;
    } else {
        Eigen::SPQR<Eigen::SparseMatrix<double>> qr;
        qr.compute(A);
        if (qr.info() != Eigen::Success)
            throw std::runtime_error("sparse QR factorization failed");
        local.rank = static_cast<int>(qr.rank());
        if (local.rank < local.cols)
            throw std::runtime_error("collocation matrix is rank deficient: rank " +
                                     std::to_string(local.rank) + " of " +
                                     std::to_string(local.cols));
        x = qr.solve(sys.b);
        Eigen::VectorXd r = sys.b - A * x;
        x += qr.solve(r);
    }
    x = cscale.asDiagonal() * x;
    local.residual = (sys.A * x - sys.b).norm() / std::max(sys.b.norm(), 1e-300);
    if (info) *info = local;
    return x;
}

} // namespace mdcol
