#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "mdcol/bspline.hpp"

// Reference implementations kept independent of the library code paths they
// check. Everything here is written from the textbook definitions, not by
// calling into the production algorithms.
namespace oracles {

/// Value of N_j^p by the plain Cox-de Boor recursion on an explicit knot
/// vector (half-open spans, closed at the right end of the domain).
double cox_de_boor(const std::vector<double>& t, int j, int p, double x);

/// All basis values at x via the recursion.
Eigen::VectorXd basis_values(const mdcol::UnivariateSpace& sp, double x);

/// Order-8 central finite difference of f at x with step hstep.
double fd_derivative(const std::function<double(double)>& f, double x, double hstep);

/// Embedding coefficients by solving the Greville collocation system of the
/// target space (Schoenberg-Whitney), independent of the blossoming path.
Eigen::VectorXd embed_by_interpolation(const mdcol::UnivariateSpace& from,
                                       const mdcol::UnivariateSpace& to,
                                       const Eigen::VectorXd& coeffs);

/// Nodes/weights of an n-point Gauss-Legendre rule on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& x,
                    std::vector<double>& w);

} // namespace oracles
