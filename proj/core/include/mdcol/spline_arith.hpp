#pragma once

#include <Eigen/Dense>

#include "mdcol/bspline.hpp"

namespace mdcol {

/// Piecewise polynomial on the uniform breakpoint mesh of [0,1] with `spans`
/// elements, stored per element in the local monomial basis of t in [0,1]
/// (xi = (e + t) / spans). Supports the exact algebra needed to express
/// products of linear gluing functions with spline derivatives back in a
/// B-spline basis.
struct PiecewisePoly {
    int spans = 0;
    Eigen::MatrixXd coef; // spans x (degree+1)

    int degree() const { return static_cast<int>(coef.cols()) - 1; }
    double h() const { return 1.0 / spans; }

    static PiecewisePoly from_spline(const UnivariateSpace& sp, const Eigen::VectorXd& coeffs);
    static PiecewisePoly linear_function(double at0, double at1, int spans);

    double eval(double xi) const;
    PiecewisePoly derivative() const;
    PiecewisePoly times(const PiecewisePoly& o) const;
    PiecewisePoly scaled(double a) const;
    PiecewisePoly plus(const PiecewisePoly& o) const;

    /// Coefficients of this function in `target`. Assumes the function lies
    /// in the target space (degree and breakpoint smoothness compatible);
    /// validated downstream by evaluation tests.
    Eigen::VectorXd to_spline_coeffs(const UnivariateSpace& target) const;
};

} // namespace mdcol
