#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mdcol/bspline.hpp"
#include "support/oracles.hpp"

using namespace mdcol;

TEST_CASE("open uniform knot vector and dimension") {
    UnivariateSpace sp(3, 2, 8);
    CHECK(sp.dim() == 12);
    CHECK(sp.num_knots() == 16);
    CHECK(sp.knot(0) == Rational(0));
    CHECK(sp.knot(3) == Rational(0));
    CHECK(sp.knot(4) == Rational(1, 9));
    CHECK(sp.knot(11) == Rational(8, 9));
    CHECK(sp.knot(15) == Rational(1));
    CHECK(sp.knot(12) == Rational(1));
    CHECK(sp.mesh_size() == Rational(1, 9));

    for (int p : {2, 3, 5}) {
        UnivariateSpace bern(p, p - 1, 0);
        CHECK(bern.dim() == p + 1);
    }
    CHECK(UnivariateSpace(5, 2, 8).dim() == 30);

    CHECK_THROWS_AS(UnivariateSpace(3, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(UnivariateSpace(3, 2, -1), std::invalid_argument);
}

TEST_CASE("evaluation matches the Cox-de Boor recursion") {
    UnivariateSpace sp(3, 2, 8);
    Eigen::MatrixXd v = sp.eval_basis(0.0, 0);
    CHECK(v(0, 0) == doctest::Approx(1.0));
    for (int j = 1; j < sp.dim(); ++j) CHECK(v(0, j) == doctest::Approx(0.0));

    Eigen::VectorXd ours = sp.eval_basis(0.25, 0).row(0);
    Eigen::VectorXd ref = oracles::basis_values(sp, 0.25);
    for (int j = 0; j < sp.dim(); ++j) CHECK(std::abs(ours[j] - ref[j]) <= 1e-14);

    CHECK_THROWS_AS(sp.eval_basis(-0.1, 0), std::domain_error);
    CHECK_THROWS_AS(sp.eval_basis(1.1, 0), std::domain_error);
}

TEST_CASE("partition of unity and derivative sums") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (auto [p, r, k] : {std::array<int, 3>{3, 2, 8}, {5, 2, 8}, {5, 4, 15}, {9, 4, 15}}) {
        UnivariateSpace sp(p, r, k);
        for (int it = 0; it < 1000; ++it) {
            double x = U(rng);
            Eigen::MatrixXd d = sp.eval_basis(x, 1);
            CHECK(std::abs(d.row(0).sum() - 1.0) <= 1e-13);
            CHECK(std::abs(d.row(1).sum()) <= 1e-10);
        }
    }
}

TEST_CASE("derivatives agree with finite differences away from knots") {
    UnivariateSpace sp(5, 2, 8);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(0.05, 0.95);
    for (int it = 0; it < 25; ++it) {
        double x = U(rng);
        // keep a distance from breakpoints
        double frac = x * 9.0 - std::floor(x * 9.0);
        if (frac < 0.2 || frac > 0.8) continue;
        Eigen::MatrixXd d = sp.eval_basis(x, 2);
        for (int j = 0; j < sp.dim(); ++j) {
            for (int order : {1, 2}) {
                auto f = [&](double y) { return sp.eval_basis(y, order - 1)(order - 1, j); };
                double ref = oracles::fd_derivative(f, x, 1e-5);
                double got = d(order, j);
                if (std::abs(ref) > 1e-4)
                    CHECK(std::abs(got - ref) / std::abs(ref) <= 1e-7);
            }
        }
    }
}

TEST_CASE("greville abscissae") {
    UnivariateSpace sp(3, 2, 8);
    CHECK(sp.greville(0) == Rational(0));
    CHECK(sp.greville(11) == Rational(1));
    CHECK(sp.greville(1) == Rational(1, 27));

    // (5,2,k): zeta_3 = 3h/5 = (2s-1)/(2s+1) h for s=2
    for (int k : {8, 15}) {
        UnivariateSpace hi(5, 2, k);
        CHECK(hi.greville(3) == Rational(3, 5) * Rational(1, k + 1));
    }

    for (auto [p, r, k] : {std::array<int, 3>{3, 2, 8}, {5, 2, 8}, {9, 4, 15}}) {
        UnivariateSpace s2(p, r, k);
        for (int j = 0; j + 1 < s2.dim(); ++j) CHECK(s2.greville(j) < s2.greville(j + 1));
        for (int j = 0; j < s2.dim(); ++j)
            CHECK(s2.greville(j) + s2.greville(s2.dim() - 1 - j) == Rational(1));
    }
    CHECK_THROWS_AS(sp.greville(12), std::out_of_range);
}

TEST_CASE("embedding is exact") {
    UnivariateSpace from(3, 2, 8), to(5, 2, 8);

    SUBCASE("identity") {
        Eigen::VectorXd c = Eigen::VectorXd::Random(from.dim());
        Eigen::VectorXd e = embed(from, from, c);
        CHECK((e - c).lpNorm<Eigen::Infinity>() <= 1e-14);
    }

    SUBCASE("constant one maps to constant one") {
        std::vector<Rational> ones(from.dim(), Rational(1));
        auto e = embed_exact(from, to, ones);
        for (const Rational& v : e) CHECK(v == Rational(1));
    }

    SUBCASE("N_4 of S^{3,2} in S^{5,2}, evaluation match") {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(from.dim());
        c[4] = 1.0;
        Eigen::VectorXd mu = embed(from, to, c);
        for (int i = 0; i <= 200; ++i) {
            double x = i / 200.0;
            double a = from.eval_basis(x, 0).row(0).dot(c);
            double b = to.eval_basis(x, 0).row(0).dot(mu);
            CHECK(std::abs(a - b) <= 1e-12);
        }
        // independent interpolation-system oracle
        Eigen::VectorXd ref = oracles::embed_by_interpolation(from, to, c);
        CHECK((mu - ref).lpNorm<Eigen::Infinity>() <= 1e-10);
    }

    SUBCASE("random coefficients, max-norm relative exactness") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> U(-2.0, 2.0);
        Eigen::VectorXd c(from.dim());
        for (int i = 0; i < c.size(); ++i) c[i] = U(rng);
        Eigen::VectorXd mu = embed(from, to, c);
        double scale = 0.0, err = 0.0;
        for (int i = 0; i <= 500; ++i) {
            double x = i / 500.0;
            double a = from.eval_basis(x, 0).row(0).dot(c);
            double b = to.eval_basis(x, 0).row(0).dot(mu);
            scale = std::max(scale, std::abs(a));
            err = std::max(err, std::abs(a - b));
        }
        CHECK(err <= 1e-12 * scale);
    }

    SUBCASE("not nested is rejected") {
        CHECK_THROWS_AS(embed(to, from, Eigen::VectorXd::Zero(to.dim())),
                        std::invalid_argument);
        UnivariateSpace other(3, 2, 4);
        CHECK_THROWS_AS(embed(from, other, Eigen::VectorXd::Zero(from.dim())),
                        std::invalid_argument);
    }
}

TEST_CASE("truncation kills boundary jets and keeps coefficients nonnegative") {
    const int s = 2;
    UnivariateSpace from(s + 1, s, 8), to(2 * s + 1, s, 8);
    const int n2 = to.dim();

    SUBCASE("interior index is unchanged") {
        for (int i = s + 1; i <= from.dim() - s - 2; ++i) {
            Eigen::VectorXd c = Eigen::VectorXd::Zero(from.dim());
            c[i] = 1.0;
            Eigen::VectorXd plainv = embed(from, to, c);
            Eigen::VectorXd tr = truncate(i, from, to, {true, true});
            CHECK((plainv - tr).lpNorm<Eigen::Infinity>() == 0.0);
        }
    }

    SUBCASE("left truncation of the first functions") {
        for (int i = 0; i <= s; ++i) {
            Eigen::VectorXd tr = truncate(i, from, to, {true, false});
            for (int j = 0; j <= s; ++j) CHECK(tr[j] == 0.0);
            for (int j = 0; j < n2; ++j) CHECK(tr[j] >= 0.0);
            Eigen::MatrixXd d0 = to.eval_basis(0.0, s);
            for (int order = 0; order <= s; ++order)
                CHECK(std::abs(d0.row(order).dot(tr)) <= 1e-12);
        }
        // knot-insertion-style oracle: independent embedding then masking
        Eigen::VectorXd c = Eigen::VectorXd::Zero(from.dim());
        c[1] = 1.0;
        Eigen::VectorXd ref = oracles::embed_by_interpolation(from, to, c);
        for (int j = 0; j <= s; ++j) ref[j] = 0.0;
        Eigen::VectorXd tr = truncate(1, from, to, {true, false});
        CHECK((tr - ref).lpNorm<Eigen::Infinity>() <= 1e-10);
    }

    SUBCASE("jets vanish at every truncated end, s = 4 as well") {
        const int s4 = 4;
        UnivariateSpace f4(s4 + 1, s4, 15), t4(2 * s4 + 1, s4, 15);
        for (int i : {0, 1, 4, f4.dim() - 2, f4.dim() - 1}) {
            Eigen::VectorXd tr = truncate(i, f4, t4, {true, true});
            for (double x : {0.0, 1.0}) {
                Eigen::MatrixXd d = t4.eval_basis(x, s4);
                for (int order = 0; order <= s4; ++order)
                    CHECK(std::abs(d.row(order).dot(tr)) <= 1e-12);
            }
        }
    }
}
