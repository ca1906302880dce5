#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "mdcol/rational.hpp"

namespace mdcol {

/// Univariate spline space on [0,1] of degree p and regularity r at the k
/// uniform interior breakpoints i/(k+1), with the open knot vector
/// (0^{p+1}, (1/(k+1))^{p-r}, ..., (k/(k+1))^{p-r}, 1^{p+1}).
/// Knots are kept as exact rationals; evaluation converts to double.
class UnivariateSpace {
public:
    UnivariateSpace(int degree, int regularity, int inner_knot_count);

    int degree() const { return p_; }
    int regularity() const { return r_; }
    int inner_knots() const { return k_; }
    int elements() const { return k_ + 1; }
    int dim() const { return p_ + 1 + k_ * (p_ - r_); }
    Rational mesh_size() const { return Rational(1, k_ + 1); }

    int num_knots() const { return static_cast<int>(knots_.size()); }
    const Rational& knot(int i) const { return knots_[i]; }
    double knot_d(int i) const { return knots_d_[i]; }

    Rational greville(int j) const;
    double greville_d(int j) const { return greville(j).to_double(); }

    /// Breakpoint element containing x (last element is closed on the right).
    int element_of(double x) const;
    /// Knot span index m of element e, i.e. [t_m, t_{m+1}] is element e.
    int span_of_element(int e) const { return p_ + e * (p_ - r_); }

    /// Values and derivatives d = 0..max_deriv of all dim() basis functions
    /// at x, as a (max_deriv+1) x dim() matrix. Throws for x outside [0,1].
    Eigen::MatrixXd eval_basis(double x, int max_deriv) const;

    /// Same, but only the p+1 functions active on the element of x; `first`
    /// receives the index of the first active function.
    void eval_active(double x, int max_deriv, Eigen::MatrixXd& ders, int& first) const;

    /// Index range [first, last] of basis functions active at x.
    std::pair<int, int> active_range(double x) const;

    bool operator==(const UnivariateSpace& o) const {
        return p_ == o.p_ && r_ == o.r_ && k_ == o.k_;
    }

private:
    int p_, r_, k_;
    std::vector<Rational> knots_;
    std::vector<double> knots_d_;
};

struct TensorSpace {
    UnivariateSpace u, v;
    int dim() const { return u.dim() * v.dim(); }
};

/// Exact coefficients of the same function in the target space. Requires
/// nested spaces: same breakpoints, from.p <= to.p, from.r >= to.r.
std::vector<Rational> embed_exact(const UnivariateSpace& from, const UnivariateSpace& to,
                                  const std::vector<Rational>& coeffs);

/// to.dim() x from.dim() matrix of the embedding, computed exactly and
/// rounded once to double.
Eigen::MatrixXd embedding_matrix(const UnivariateSpace& from, const UnivariateSpace& to);

Eigen::VectorXd embed(const UnivariateSpace& from, const UnivariateSpace& to,
                      const Eigen::VectorXd& coeffs);

struct TruncEnds {
    bool left = false;
    bool right = false;
};

/// Coefficients of the truncation of N_i^{from} with respect to `to`: the
/// embedded coefficient vector with the first (respectively last) to.r+1
/// entries set to zero, which kills all derivatives of order <= to.r of the
/// result at the selected ends.
std::vector<Rational> truncate_exact(int i, const UnivariateSpace& from,
                                     const UnivariateSpace& to, TruncEnds ends);

Eigen::VectorXd truncate(int i, const UnivariateSpace& from, const UnivariateSpace& to,
                         TruncEnds ends);

} // namespace mdcol
