#include "mdcol/bspline.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace mdcol {

UnivariateSpace::UnivariateSpace(int degree, int regularity, int inner_knot_count)
    : p_(degree), r_(regularity), k_(inner_knot_count) {
    if (!(0 <= r_ && r_ < p_) || k_ < 0)
        throw std::invalid_argument("UnivariateSpace: need 0 <= r < p and k >= 0");
    knots_.reserve(2 * (p_ + 1) + k_ * (p_ - r_));
    for (int i = 0; i <= p_; ++i) knots_.emplace_back(0);
    for (int i = 1; i <= k_; ++i)
        for (int m = 0; m < p_ - r_; ++m) knots_.emplace_back(i, k_ + 1);
    for (int i = 0; i <= p_; ++i) knots_.emplace_back(1);
    knots_d_.resize(knots_.size());
    for (std::size_t i = 0; i < knots_.size(); ++i) knots_d_[i] = knots_[i].to_double();
}

Rational UnivariateSpace::greville(int j) const {
    if (j < 0 || j >= dim()) throw std::out_of_range("greville: index out of range");
    Rational s(0);
    for (int i = j + 1; i <= j + p_; ++i) s += knots_[i];
    return s / Rational(p_);
}

int UnivariateSpace::element_of(double x) const {
    if (x < 0.0 || x > 1.0) throw std::domain_error("element_of: x outside [0,1]");
    int e = static_cast<int>(std::floor(x * (k_ + 1)));
    return std::min(e, k_);
}

std::pair<int, int> UnivariateSpace::active_range(double x) const {
    int m = span_of_element(element_of(x));
    return {m - p_, m};
}

namespace {

// Derivatives of the p+1 nonvanishing basis functions on the span [t_m, t_{m+1}]
// (NURBS-book style recurrence). ders is (nd+1) x (p+1).
void ders_basis_funs(int m, double x, int p, int nd, const std::vector<double>& t,
                     Eigen::MatrixXd& ders) {
    const int n = std::min(nd, p);
    Eigen::MatrixXd ndu(p + 1, p + 1);
    std::vector<double> left(p + 1), right(p + 1);
    ndu(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - t[m + 1 - j];
        right[j] = t[m + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right[r + 1] + left[j - r];
            double tmp = ndu(r, j - 1) / ndu(j, r);
            ndu(r, j) = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        ndu(j, j) = saved;
    }
    ders.setZero(nd + 1, p + 1);
    for (int j = 0; j <= p; ++j) ders(0, j) = ndu(j, p);
    Eigen::MatrixXd a(2, p + 1);
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a(0, 0) = 1.0;
        for (int kd = 1; kd <= n; ++kd) {
            double d = 0.0;
            int rk = r - kd, pk = p - kd;
            if (r >= kd) {
                a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
                d = a(s2, 0) * ndu(rk, pk);
            }
            int j1 = (rk >= -1) ? 1 : -rk;
            int j2 = (r - 1 <= pk) ? kd - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
                d += a(s2, j) * ndu(rk + j, pk);
            }
            if (r <= pk) {
                a(s2, kd) = -a(s1, kd - 1) / ndu(pk + 1, r);
                d += a(s2, kd) * ndu(r, pk);
            }
            ders(kd, r) = d;
            std::swap(s1, s2);
        }
    }
    double fac = p;
    for (int kd = 1; kd <= n; ++kd) {
        for (int j = 0; j <= p; ++j) ders(kd, j) *= fac;
        fac *= (p - kd);
    }
}

} // namespace

void UnivariateSpace::eval_active(double x, int max_deriv, Eigen::MatrixXd& ders,
                                  int& first) const {
    int m = span_of_element(element_of(x));
    first = m - p_;
    ders_basis_funs(m, x, p_, max_deriv, knots_d_, ders);
}

Eigen::MatrixXd UnivariateSpace::eval_basis(double x, int max_deriv) const {
    Eigen::MatrixXd local;
    int first = 0;
    eval_active(x, max_deriv, local, first);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(max_deriv + 1, dim());
    out.block(0, first, max_deriv + 1, p_ + 1) = local;
    return out;
}

namespace {

// Polar form of the span-m polynomial piece at arguments args[0..p-1],
// by the multi-affine de Boor recurrence.
Rational blossom_span(const std::vector<Rational>& t, const std::vector<Rational>& d,
                      int m, int p, const std::vector<Rational>& args) {
    std::vector<Rational> a(d.begin() + (m - p), d.begin() + (m + 1));
    for (int r = 1; r <= p; ++r) {
        for (int i = 0; i <= p - r; ++i) {
            int j = m - p + r + i;
            Rational den = t[j + p - r + 1] - t[j];
            Rational alpha = (args[r - 1] - t[j]) / den;
            a[i] = (Rational(1) - alpha) * a[i] + alpha * a[i + 1];
        }
    }
    return a[0];
}

} // namespace

std::vector<Rational> embed_exact(const UnivariateSpace& from, const UnivariateSpace& to,
                                  const std::vector<Rational>& coeffs) {
    if (from.degree() > to.degree() || from.regularity() < to.regularity() ||
        from.inner_knots() != to.inner_knots())
        throw std::invalid_argument("embed: spaces are not nested");
    if (static_cast<int>(coeffs.size()) != from.dim())
        throw std::invalid_argument("embed: coefficient count mismatch");

    const int p1 = from.degree(), p2 = to.degree(), k = from.inner_knots();

    std::vector<Rational> tf(from.num_knots()), tt(to.num_knots());
    for (int i = 0; i < from.num_knots(); ++i) tf[i] = from.knot(i);
    for (int i = 0; i < to.num_knots(); ++i) tt[i] = to.knot(i);

    // Bezier points of each breakpoint element, then degree elevation to p2.
    std::vector<std::vector<Rational>> bez(k + 1);
    for (int e = 0; e <= k; ++e) {
        int m = from.span_of_element(e);
        Rational ua(e, k + 1), ub(e + 1, k + 1);
        std::vector<Rational> b(p1 + 1);
        std::vector<Rational> args(p1);
        for (int i = 0; i <= p1; ++i) {
            for (int q = 0; q < p1; ++q) args[q] = (q < p1 - i) ? ua : ub;
            b[i] = blossom_span(tf, coeffs, m, p1, args);
        }
        for (int d = p1; d < p2; ++d) {
            std::vector<Rational> up(d + 2);
            up[0] = b[0];
            up[d + 1] = b[d];
            for (int i = 1; i <= d; ++i)
                up[i] = Rational(i, d + 1) * b[i - 1] + Rational(d + 1 - i, d + 1) * b[i];
            b = std::move(up);
        }
        bez[e] = std::move(b);
    }

    // Target coefficient j is the polar form of the piece around its Greville
    // abscissa, evaluated at the knot window (T_{j+1}, ..., T_{j+p2}).
    std::vector<Rational> out(to.dim());
    for (int j = 0; j < to.dim(); ++j) {
        Rational g = to.greville(j);
        int e = std::min(static_cast<int>((g * Rational(k + 1)).to_double()), k);
        // keep the window inside the support of the piece
        e = std::max(e, 0);
        Rational ua(e, k + 1), ub(e + 1, k + 1);
        Rational width = ub - ua;
        std::vector<Rational> b = bez[e];
        for (int r = 1; r <= p2; ++r) {
            Rational lam = (tt[j + r] - ua) / width;
            for (int i = 0; i <= p2 - r; ++i)
                b[i] = (Rational(1) - lam) * b[i] + lam * b[i + 1];
        }
        out[j] = b[0];
    }
    return out;
}

Eigen::MatrixXd embedding_matrix(const UnivariateSpace& from, const UnivariateSpace& to) {
    Eigen::MatrixXd M(to.dim(), from.dim());
    std::vector<Rational> unit(from.dim(), Rational(0));
    for (int i = 0; i < from.dim(); ++i) {
        unit[i] = Rational(1);
        std::vector<Rational> col = embed_exact(from, to, unit);
        unit[i] = Rational(0);
        for (int j = 0; j < to.dim(); ++j) M(j, i) = col[j].to_double();
    }
    return M;
}

Eigen::VectorXd embed(const UnivariateSpace& from, const UnivariateSpace& to,
                      const Eigen::VectorXd& coeffs) {
    if (coeffs.size() != from.dim())
        throw std::invalid_argument("embed: coefficient count mismatch");
    return embedding_matrix(from, to) * coeffs;
}

std::vector<Rational> truncate_exact(int i, const UnivariateSpace& from,
                                     const UnivariateSpace& to, TruncEnds ends) {
    if (i < 0 || i >= from.dim()) throw std::out_of_range("truncate: index out of range");
    std::vector<Rational> unit(from.dim(), Rational(0));
    unit[i] = Rational(1);
    std::vector<Rational> mu = embed_exact(from, to, unit);
    const int s = to.regularity();
    const int n = to.dim();
    if (ends.left)
        for (int j = 0; j <= s; ++j) mu[j] = Rational(0);
    if (ends.right)
        for (int j = n - s - 1; j < n; ++j) mu[j] = Rational(0);
    return mu;
}

Eigen::VectorXd truncate(int i, const UnivariateSpace& from, const UnivariateSpace& to,
                         TruncEnds ends) {
    std::vector<Rational> mu = truncate_exact(i, from, to, ends);
    Eigen::VectorXd out(to.dim());
    for (int j = 0; j < to.dim(); ++j) out[j] = mu[j].to_double();
    return out;
}

} // namespace mdcol
