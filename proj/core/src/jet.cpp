#include "mdcol/jet.hpp"

#include <cmath>
#include <stdexcept>

namespace mdcol {

namespace {
double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}
} // namespace

double Jet2::deriv(int a, int b) const {
    if (a + b > order_) return 0.0;
    return at(a, b) * factorial(a) * factorial(b);
}

Jet2 Jet2::constant(double v, int order) {
    Jet2 j(order);
    j.c_[0] = v;
    return j;
}

Jet2 Jet2::from_derivs(const Eigen::MatrixXd& d, int order) {
    Jet2 j(order);
    for (int a = 0; a <= order; ++a)
        for (int b = 0; a + b <= order; ++b)
            j.at(a, b) = d(a, b) / (factorial(a) * factorial(b));
    return j;
}

Jet2 Jet2::truncated(int order) const {
    Jet2 j(order);
    for (int a = 0; a <= order; ++a)
        for (int b = 0; a + b <= order; ++b) j.at(a, b) = at(a, b);
    return j;
}

Jet2 Jet2::operator+(const Jet2& o) const {
    int m = std::min(order_, o.order_);
    Jet2 j(m);
    for (int a = 0; a <= m; ++a)
        for (int b = 0; a + b <= m; ++b) j.at(a, b) = at(a, b) + o.at(a, b);
    return j;
}

Jet2 Jet2::operator-(const Jet2& o) const {
    int m = std::min(order_, o.order_);
    Jet2 j(m);
    for (int a = 0; a <= m; ++a)
        for (int b = 0; a + b <= m; ++b) j.at(a, b) = at(a, b) - o.at(a, b);
    return j;
}

Jet2& Jet2::operator+=(const Jet2& o) {
    *this = *this + o;
    return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
    *this = *this - o;
    return *this;
}

Jet2 Jet2::operator*(const Jet2& o) const {
    int m = std::min(order_, o.order_);
    Jet2 j(m);
    for (int a1 = 0; a1 <= order_; ++a1)
        for (int b1 = 0; a1 + b1 <= order_; ++b1) {
            double v1 = at(a1, b1);
            if (v1 == 0.0 || a1 + b1 > m) continue;
            for (int a2 = 0; a2 + a1 <= m; ++a2)
                for (int b2 = 0; a1 + b1 + a2 + b2 <= m; ++b2)
                    j.at(a1 + a2, b1 + b2) += v1 * o.at(a2, b2);
        }
    return j;
}

Jet2 Jet2::operator*(double a) const {
    Jet2 j = *this;
    j.c_ *= a;
    return j;
}

Jet2 Jet2::reciprocal() const {
    double f0 = c_[0];
    if (f0 == 0.0) throw std::domain_error("Jet2::reciprocal: zero constant term");
    // 1/f = (1/f0) sum_m (-g)^m with g = f/f0 - 1
    Jet2 g = *this * (1.0 / f0);
    g.c_[0] = 0.0;
    Jet2 out = Jet2::constant(1.0, order_);
    Jet2 pow = Jet2::constant(1.0, order_);
    for (int m = 1; m <= order_; ++m) {
        pow = pow * g;
        out = (m % 2) ? out - pow : out + pow;
    }
    return out * (1.0 / f0);
}

Jet2 Jet2::dx() const {
    Jet2 j(std::max(order_ - 1, 0));
    for (int a = 0; a + 1 <= order_; ++a)
        for (int b = 0; a + 1 + b <= order_; ++b) j.at(a, b) = (a + 1) * at(a + 1, b);
    return j;
}

Jet2 Jet2::dy() const {
    Jet2 j(std::max(order_ - 1, 0));
    for (int a = 0; a <= order_ - 1; ++a)
        for (int b = 0; a + b + 1 <= order_; ++b) j.at(a, b) = (b + 1) * at(a, b + 1);
    return j;
}

} // namespace mdcol
