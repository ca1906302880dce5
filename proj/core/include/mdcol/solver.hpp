#pragma once

#include <Eigen/Sparse>
#include <functional>

#include "mdcol/collocation.hpp"
#include "mdcol/pullback.hpp"

namespace mdcol {

/// Exact solution with the derivative closures the right-hand sides and
/// error norms need.
struct ManufacturedSolution {
    std::function<double(const Vec2&)> u;
    std::function<Vec2(const Vec2&)> grad_u;
    std::function<double(const Vec2&)> laplace_u;
    std::function<Vec2(const Vec2&)> grad_laplace_u;
    std::function<double(const Vec2&)> bilaplace_u;

    /// u(x, y) = cos(x) sin(y): laplace = -2u, bilaplace = 4u.
    static ManufacturedSolution cos_sin();
};

/// Per-patch inverted index over the degree-(2s+1) tensor coefficients of
/// all smooth basis functions; the workhorse behind assembly and quadrature.
class SpaceEvaluator {
public:
    explicit SpaceEvaluator(const SmoothSpace& w);

    const SmoothSpace& space() const { return *w_; }

    /// Parametric derivative grids (a,b <= nd) of every function alive at the
    /// point; fn(fid, derivs) with derivs(a,b) = d^{(a,b)} phi.
    template <class Fn>
    void for_each_function(int patch, const Vec2& zeta, int nd, Fn&& fn) const {
        const UnivariateSpace& sp2 = w_->space_p2();
        Eigen::MatrixXd Nu, Nv;
        int fu = 0, fv = 0;
        sp2.eval_active(zeta.x(), nd, Nu, fu);
        sp2.eval_active(zeta.y(), nd, Nv, fv);
        const int wdt = sp2.degree() + 1;
        const int n2 = sp2.dim();
        std::vector<int> touched;
        std::vector<Eigen::MatrixXd>& jets = scratch_;
        for (int i = 0; i < wdt; ++i)
            for (int j = 0; j < wdt; ++j) {
                const auto& cell = cells_[patch][(fu + i) * n2 + (fv + j)];
                if (cell.empty()) continue;
                for (const auto& [fid, c] : cell) {
                    if (jets[fid].size() == 0) {
                        jets[fid].setZero(nd + 1, nd + 1);
                        touched.push_back(fid);
                    }
                    for (int a = 0; a <= nd; ++a)
                        for (int b = 0; b <= nd; ++b)
                            jets[fid](a, b) += c * Nu(a, i) * Nv(b, j);
                }
            }
        std::sort(touched.begin(), touched.end());
        for (int fid : touched) {
            fn(fid, jets[fid]);
            jets[fid].resize(0, 0);
        }
    }

    /// Per-patch dense coefficient grids of the field sum_i c_i phi_i.
    std::vector<Eigen::MatrixXd> contract(const Eigen::VectorXd& c) const;

    /// Derivative grid (a,b <= nd) of a contracted field on one patch.
    Eigen::MatrixXd eval_field(const Eigen::MatrixXd& grid, const Vec2& zeta, int nd) const;

private:
    const SmoothSpace* w_;
    std::vector<std::vector<std::vector<std::pair<int, double>>>> cells_;
    mutable std::vector<Eigen::MatrixXd> scratch_;
};

struct CollocationSystem {
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd b;
    bool square() const { return A.rows() == A.cols(); }
};

CollocationSystem assemble(const SpaceEvaluator& ev, const PointSet& points,
                           const ManufacturedSolution& sol, ProblemKind problem);

struct SolveInfo {
    int rows = 0, cols = 0;
    bool square = false;
    int rank = 0;
    double residual = 0.0; // ||Ax-b|| / ||b||
};

/// Direct sparse factorization for square systems, sparse orthogonal
/// factorization (SuiteSparseQR) for least squares. Throws on rank
/// deficiency.
Eigen::VectorXd solve(const CollocationSystem& sys, SolveInfo* info = nullptr);

struct ErrorReport {
    // relative errors; entries beyond the smoothness order stay at zero
    double l2 = 0.0, h1 = 0.0, h2 = 0.0, h3 = 0.0, h4 = 0.0;
};

/// Relative L2/H^m-equivalent errors by per-element Gauss quadrature with
/// quad_points nodes per direction (default degree+2).
ErrorReport error_norms(const SpaceEvaluator& ev, const Eigen::VectorXd& c,
                        const ManufacturedSolution& sol, int quad_points = 0);

} // namespace mdcol
