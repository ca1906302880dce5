#pragma once

#include <Eigen/Dense>
#include <array>

namespace mdcol {

/// Truncated bivariate Taylor expansion around a point: coefficients c_{ab}
/// of dx^a dy^b for a + b <= order (so derivative (a,b) equals a! b! c_{ab}).
/// Supports the ring operations needed to evaluate pulled-back differential
/// operators exactly to the truncation order.
class Jet2 {
public:
    Jet2() = default;
    explicit Jet2(int order) : order_(order), c_(Eigen::VectorXd::Zero(size(order))) {}

    static int size(int order) { return (order + 1) * (order + 2) / 2; }
    static int tri(int a, int b) {
        int t = a + b;
        return t * (t + 1) / 2 + b;
    }

    int order() const { return order_; }
    double value() const { return c_[0]; }
    double& at(int a, int b) { return c_[tri(a, b)]; }
    double at(int a, int b) const { return (a + b <= order_) ? c_[tri(a, b)] : 0.0; }
    /// derivative value d^{(a,b)} = a! b! c_{ab}
    double deriv(int a, int b) const;

    static Jet2 constant(double v, int order);
    /// build from derivative values d(a,b), a,b indexable up to `order`
    static Jet2 from_derivs(const Eigen::MatrixXd& d, int order);

    Jet2 truncated(int order) const;
    Jet2 operator+(const Jet2& o) const;
    Jet2 operator-(const Jet2& o) const;
    Jet2 operator*(const Jet2& o) const; // truncated to min order
    Jet2 operator*(double a) const;
    Jet2& operator+=(const Jet2& o);
    Jet2& operator-=(const Jet2& o);
    Jet2 reciprocal() const; // needs nonzero constant term
    Jet2 dx() const;         // derivative, order drops by one
    Jet2 dy() const;

private:
    int order_ = 0;
    Eigen::VectorXd c_ = Eigen::VectorXd::Zero(1);
};

inline Jet2 operator*(double a, const Jet2& j) { return j * a; }

} // namespace mdcol
