#include "support/oracles.hpp"

#include <cmath>

namespace oracles {

double cox_de_boor(const std::vector<double>& t, int j, int p, double x) {
    if (p == 0) {
        bool last = (j + 2 == static_cast<int>(t.size())) ||
                    (t[j + 1] == t.back() && t[j] < t[j + 1]);
        if (last) return (t[j] <= x && x <= t[j + 1]) ? 1.0 : 0.0;
        return (t[j] <= x && x < t[j + 1]) ? 1.0 : 0.0;
    }
    double a = 0.0, b = 0.0;
    if (t[j + p] > t[j]) a = (x - t[j]) / (t[j + p] - t[j]) * cox_de_boor(t, j, p - 1, x);
    if (t[j + p + 1] > t[j + 1])
        b = (t[j + p + 1] - x) / (t[j + p + 1] - t[j + 1]) * cox_de_boor(t, j + 1, p - 1, x);
    return a + b;
}

Eigen::VectorXd basis_values(const mdcol::UnivariateSpace& sp, double x) {
    std::vector<double> t(sp.num_knots());
    for (int i = 0; i < sp.num_knots(); ++i) t[i] = sp.knot_d(i);
    Eigen::VectorXd v(sp.dim());
    for (int j = 0; j < sp.dim(); ++j) v[j] = cox_de_boor(t, j, sp.degree(), x);
    return v;
}

double fd_derivative(const std::function<double(double)>& f, double x, double h) {
    // 8th-order central stencil
    static const double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    double d = 0.0;
    for (int m = 1; m <= 4; ++m) d += c[m - 1] * (f(x + m * h) - f(x - m * h));
    return d / h;
}

Eigen::VectorXd embed_by_interpolation(const mdcol::UnivariateSpace& from,
                                       const mdcol::UnivariateSpace& to,
                                       const Eigen::VectorXd& coeffs) {
    const int n = to.dim();
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        double x = to.greville_d(i);
        A.row(i) = to.eval_basis(x, 0).row(0);
        b[i] = from.eval_basis(x, 0).row(0).dot(coeffs);
    }
    return A.partialPivLu().solve(b);
}

void gauss_legendre(int n, double a, double b, std::vector<double>& x,
                    std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = a + 0.5 * (b - a) * (1.0 - z);
        x[n - 1 - i] = a + 0.5 * (b - a) * (1.0 + z);
        w[i] = w[n - 1 - i] = (b - a) / ((1.0 - z * z) * pp * pp);
    }
}

} // namespace oracles
