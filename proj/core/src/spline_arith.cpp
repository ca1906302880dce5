#include "mdcol/spline_arith.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace mdcol {

PiecewisePoly PiecewisePoly::from_spline(const UnivariateSpace& sp,
                                         const Eigen::VectorXd& coeffs) {
    if (coeffs.size() != sp.dim())
        throw std::invalid_argument("from_spline: coefficient count mismatch");
    const int p = sp.degree();
    const int spans = sp.elements();
    const double h = 1.0 / spans;
    PiecewisePoly out;
    out.spans = spans;
    out.coef.setZero(spans, p + 1);
    Eigen::MatrixXd ders;
    int first = 0;
    for (int e = 0; e < spans; ++e) {
        // Taylor expansion at the element start, evaluated from inside.
        double x0 = (e + 0.5) * h;
        sp.eval_active(x0, p, ders, first);
        // local Taylor at midpoint in xi, converted to monomials of t around 0.5
        Eigen::VectorXd taylor = Eigen::VectorXd::Zero(p + 1);
        double fact = 1.0, hp = 1.0;
        for (int d = 0; d <= p; ++d) {
            double v = 0.0;
            for (int j = 0; j <= p; ++j) v += coeffs[first + j] * ders(d, j);
            taylor[d] = v * hp / fact;
            fact *= (d + 1);
            hp *= h;
        }
        // shift monomials from (t-1/2)^d to t^d
        for (int d = 0; d <= p; ++d) {
            double binom = 1.0;
            double pw = 1.0;
            for (int m = d; m >= 0; --m) {
                out.coef(e, m) += taylor[d] * binom * pw * ((d - m) % 2 ? -1.0 : 1.0);
                binom = binom * m / (d - m + 1);
                pw *= 0.5;
            }
        }
    }
    return out;
}

PiecewisePoly PiecewisePoly::linear_function(double at0, double at1, int spans) {
    PiecewisePoly out;
    out.spans = spans;
    out.coef.setZero(spans, 2);
    double h = 1.0 / spans;
    for (int e = 0; e < spans; ++e) {
        out.coef(e, 0) = at0 + (at1 - at0) * (e * h);
        out.coef(e, 1) = (at1 - at0) * h;
    }
    return out;
}

double PiecewisePoly::eval(double xi) const {
    int e = std::min(static_cast<int>(std::floor(xi * spans)), spans - 1);
    e = std::max(e, 0);
    double t = xi * spans - e;
    double v = 0.0;
    for (int m = degree(); m >= 0; --m) v = v * t + coef(e, m);
    return v;
}

PiecewisePoly PiecewisePoly::derivative() const {
    PiecewisePoly out;
    out.spans = spans;
    int d = std::max(degree(), 1);
    out.coef.setZero(spans, d);
    for (int e = 0; e < spans; ++e)
        for (int m = 1; m <= degree(); ++m) out.coef(e, m - 1) = coef(e, m) * m * spans;
    return out;
}

PiecewisePoly PiecewisePoly::times(const PiecewisePoly& o) const {
    assert(spans == o.spans);
    PiecewisePoly out;
    out.spans = spans;
    out.coef.setZero(spans, degree() + o.degree() + 1);
    for (int e = 0; e < spans; ++e)
        for (int m = 0; m <= degree(); ++m)
            for (int n = 0; n <= o.degree(); ++n)
                out.coef(e, m + n) += coef(e, m) * o.coef(e, n);
    return out;
}

PiecewisePoly PiecewisePoly::scaled(double a) const {
    PiecewisePoly out = *this;
    out.coef *= a;
    return out;
}

PiecewisePoly PiecewisePoly::plus(const PiecewisePoly& o) const {
    assert(spans == o.spans);
    PiecewisePoly out;
    out.spans = spans;
    out.coef.setZero(spans, std::max(degree(), o.degree()) + 1);
    out.coef.leftCols(degree() + 1) = coef;
    out.coef.leftCols(o.degree() + 1) += o.coef;
    return out;
}

Eigen::VectorXd PiecewisePoly::to_spline_coeffs(const UnivariateSpace& target) const {
    if (target.elements() != spans)
        throw std::invalid_argument("to_spline_coeffs: breakpoint mesh mismatch");
    if (degree() > target.degree())
        throw std::invalid_argument("to_spline_coeffs: degree too high for target");
    const int p = target.degree();
    const double h = 1.0 / spans;

    // local monomial -> Bernstein of degree p per element
    Eigen::MatrixXd bez(spans, p + 1);
    bez.setZero();
    for (int e = 0; e < spans; ++e) {
        for (int m = 0; m <= degree(); ++m) {
            double c = coef(e, m);
            if (c == 0.0) continue;
            // t^m = sum_{i>=m} C(i,m)/C(p,m) B_i^p(t)
            double cim = 1.0; // C(m,m)
            double cpm = 1.0; // C(p,m)
            for (int q = 0; q < m; ++q) cpm = cpm * (p - q) / (q + 1);
            for (int i = m; i <= p; ++i) {
                bez(e, i) += c * cim / cpm;
                cim = cim * (i + 1) / (i + 1 - m);
            }
        }
    }

    // de Boor points by blossoming the element polynomial at the knot window
    Eigen::VectorXd out(target.dim());
    std::vector<double> b(p + 1);
    for (int j = 0; j < target.dim(); ++j) {
        double g = target.greville_d(j);
        int e = std::min(static_cast<int>(std::floor(g * spans)), spans - 1);
        double ua = e * h;
        for (int i = 0; i <= p; ++i) b[i] = bez(e, i);
        for (int r = 1; r <= p; ++r) {
            double lam = (target.knot_d(j + r) - ua) / h;
            for (int i = 0; i <= p - r; ++i) b[i] = (1.0 - lam) * b[i] + lam * b[i + 1];
        }
        out[j] = b[0];
    }
    return out;
}

} // namespace mdcol
