#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>

#include "mdcol/geometry.hpp"
#include "mdcol/gluing.hpp"
#include "support/oracles.hpp"

using namespace mdcol;

TEST_CASE("domain A basics") {
    MultiPatchDomain d = builtin_domain("A");
    CHECK(d.num_patches() == 1);
    CHECK(d.inner_edges().empty());
    CHECK(d.boundary_edges().size() == 4);
    CHECK(d.vertices().size() == 4);
    Vec2 f00 = d.patch(0).eval(0.0, 0.0);
    CHECK(f00.x() == doctest::Approx(0.75));
    CHECK(f00.y() == doctest::Approx(0.75));
    // bilinear: all second parametric derivatives vanish
    GeometryJet j = d.patch(0).jet(0.3, 0.7, 2);
    CHECK(j.at(2, 0).norm() == 0.0);
    CHECK(j.at(0, 2).norm() == 0.0);
    CHECK(j.at(1, 1).norm() > 0.0);
}

TEST_CASE("domain B topology") {
    MultiPatchDomain d = builtin_domain("B");
    CHECK(d.num_patches() == 3);
    CHECK(d.inner_edges().size() == 3);
    CHECK(d.boundary_edges().size() == 6);
    int inner_v = 0, val2 = 0, val1 = 0;
    for (const Vertex& v : d.vertices()) {
        if (!v.boundary) {
            ++inner_v;
            CHECK(v.valency() == 3);
        } else if (v.valency() == 2) {
            ++val2;
        } else if (v.valency() == 1) {
            ++val1;
        }
    }
    CHECK(inner_v == 1);
    CHECK(val2 == 3);
    CHECK(val1 == 3);
    CHECK(d.vertices().size() == 7);
}

TEST_CASE("domain C and F topology") {
    for (const char* name : {"C", "F"}) {
        MultiPatchDomain d = builtin_domain(name);
        CHECK(d.num_patches() == 5);
        CHECK(d.inner_edges().size() == 5);
        CHECK(d.boundary_edges().size() == 10);
        int inner_v = 0, val2 = 0, val1 = 0;
        for (const Vertex& v : d.vertices()) {
            if (!v.boundary) {
                ++inner_v;
                CHECK(v.valency() == 5);
            } else if (v.valency() == 2) {
                ++val2;
            } else {
                ++val1;
            }
        }
        CHECK(inner_v == 1);
        CHECK(val2 == 5);
        CHECK(val1 == 5);
    }
}

TEST_CASE("domain G topology and valencies") {
    MultiPatchDomain d = builtin_domain("G");
    CHECK(d.num_patches() == 2);
    CHECK(d.inner_edges().size() == 1);
    CHECK(d.boundary_edges().size() == 6);
    std::multiset<int> val;
    for (const Vertex& v : d.vertices()) val.insert(v.valency());
    CHECK(val == std::multiset<int>{1, 1, 1, 1, 2, 2});
}

TEST_CASE("domain D is a single biquadratic patch") {
    MultiPatchDomain d = builtin_domain("D");
    CHECK(d.num_patches() == 1);
    CHECK(!d.patch(0).is_bilinear());
    CHECK(d.patch(0).space_u().degree() == 2);
    Vec2R c00 = d.patch(0).control(0, 0);
    CHECK(c00.x == Rational(18, 5));
    CHECK(c00.y == Rational(36, 5));
}

TEST_CASE("domain F control net spot checks") {
    MultiPatchDomain d = builtin_domain("F");
    Vec2 f00 = d.patch(0).eval(0.0, 0.0);
    CHECK(f00.norm() == doctest::Approx(0.0));
    CHECK(d.patch(0).control(0, 1).x == Rational(3, 32));
    CHECK(d.patch(0).control(0, 1).y == Rational(459, 1600));
}

TEST_CASE("domain E needs a geometry file") {
    CHECK_THROWS_WITH_AS(builtin_domain("E"),
                         doctest::Contains("use load_geometry"), std::invalid_argument);
}

TEST_CASE("edge matching invariant") {
    for (const char* name : {"B", "C", "F", "G"}) {
        MultiPatchDomain d = builtin_domain(name);
        for (const InnerEdge& e : d.inner_edges()) {
            Dihedral ca = e.a.chart(), cb = e.b.chart();
            for (int i = 0; i <= 50; ++i) {
                double t = i / 50.0;
                auto xa = ca(0.0, t);
                auto xb = cb(0.0, t);
                Vec2 fa = d.patch(e.a.patch).eval(xa[0], xa[1]);
                Vec2 fb = d.patch(e.b.patch).eval(xb[0], xb[1]);
                CHECK((fa - fb).norm() <= 1e-12);
            }
        }
    }
}

TEST_CASE("jets match finite differences") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0.1, 0.9);
    for (const char* name : {"A", "B", "D", "F", "G"}) {
        MultiPatchDomain d = builtin_domain(name);
        for (int pi = 0; pi < d.num_patches(); ++pi) {
            const Patch& p = d.patch(pi);
            for (int it = 0; it < 20; ++it) {
                double x = U(rng), y = U(rng);
                GeometryJet j = p.jet(x, y, 3);
                for (int a = 0; a <= 3; ++a)
                    for (int b = 0; a + b <= 3; ++b) {
                        if (a + b == 0) continue;
                        for (int comp = 0; comp < 2; ++comp) {
                            auto f = [&](double t) {
                                if (a > 0) {
                                    GeometryJet g = p.jet(t, y, 3);
                                    return g.at(a - 1, b)[comp];
                                }
                                GeometryJet g = p.jet(x, t, 3);
                                return g.at(a, b - 1)[comp];
                            };
                            double ref = oracles::fd_derivative(f, a > 0 ? x : y, 1e-5);
                            double got = j.at(a, b)[comp];
                            // relative up to the finite-difference noise floor
                            CHECK(std::abs(got - ref) <= 1e-6 * std::max(1.0, std::abs(ref)));
                        }
                    }
            }
        }
    }
}

TEST_CASE("gluing data") {
    SUBCASE("two mirror unit squares give lambda = 1/c, alpha = -1/+1") {
        // patch 0 = [-1,0] x [0,1] oriented so the shared edge x=0 matches,
        // patch 1 = [0,1] x [0,1]
        auto r = [](std::int64_t n) { return Rational(n); };
        Patch p0 = Patch::bilinear({{{r(0), r(0)}, {r(-1), r(0)}, {r(0), r(1)}, {r(-1), r(1)}}});
        Patch p1 = Patch::bilinear({{{r(0), r(0)}, {r(1), r(0)}, {r(0), r(1)}, {r(1), r(1)}}});
        MultiPatchDomain d = MultiPatchDomain::build({p0, p1});
        REQUIRE(d.inner_edges().size() == 1);
        EdgeFrame fr = edge_frame(d, d.inner_edges()[0]);
        CHECK(fr.glue.lambda == doctest::Approx(1.0).epsilon(1e-12));
        for (double t : {0.0, 0.5, 1.0}) {
            CHECK(fr.glue.alpha_a(t) == doctest::Approx(-1.0));
            CHECK(fr.glue.alpha_b(t) == doctest::Approx(1.0));
            CHECK(fr.glue.beta_a(t) == doctest::Approx(0.0));
            CHECK(fr.glue.beta_b(t) == doctest::Approx(0.0));
        }
    }

    SUBCASE("domain G edge against a dense least-squares oracle") {
        MultiPatchDomain d = builtin_domain("G");
        EdgeFrame fr = edge_frame(d, d.inner_edges()[0]);
        CHECK(fr.glue.lambda > 0.0);
        for (double t : {0.0, 0.5, 1.0}) {
            CHECK(fr.glue.alpha_a(t) < 0.0);
            CHECK(fr.glue.alpha_b(t) > 0.0);
        }
        // lambda by 1000-point quadrature minimization of the stated objective
        std::vector<double> qx, qw;
        oracles::gauss_legendre(1000, 0.0, 1.0, qx, qw);
        double num = 0.0, den = 0.0;
        for (int i = 0; i < 1000; ++i) {
            double da = fr.glue.alpha_a(qx[i]) / fr.glue.lambda;
            double db = fr.glue.alpha_b(qx[i]) / fr.glue.lambda;
            num += qw[i] * (db - da);
            den += qw[i] * (da * da + db * db);
        }
        CHECK(std::abs(fr.glue.lambda - num / den) <= 1e-10);
    }

    SUBCASE("orthogonal parameterization along the edge gives beta = 0") {
        MultiPatchDomain d = builtin_domain("G");
        // patch interfaces of the L-shape are diagonal; build two axis-aligned
        // squares instead
        auto r = [](std::int64_t n) { return Rational(n); };
        Patch p0 = Patch::bilinear({{{r(0), r(0)}, {r(-1), r(0)}, {r(0), r(1)}, {r(-1), r(1)}}});
        Patch p1 = Patch::bilinear({{{r(0), r(0)}, {r(1), r(0)}, {r(0), r(1)}, {r(1), r(1)}}});
        MultiPatchDomain sq = MultiPatchDomain::build({p0, p1});
        EdgeFrame fr = edge_frame(sq, sq.inner_edges()[0]);
        CHECK(std::abs(fr.glue.beta_a(0.3)) <= 1e-13);
    }
}

TEST_CASE("domain F passes the bilinear-like G^4 linearity checks") {
    MultiPatchDomain d = builtin_domain("F");
    for (const InnerEdge& e : d.inner_edges()) {
        EdgeFrame fr = edge_frame(d, e); // throws if d or beta is not linear
        CHECK(fr.glue.lambda > 0.0);
    }
}

TEST_CASE("geometry file round trip") {
    MultiPatchDomain d = builtin_domain("A");
    std::string path = "/tmp/mdcol_test_A.json";
    save_geometry(d, path);
    MultiPatchDomain e = load_geometry(path);
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) {
            double x = i / 20.0, y = j / 20.0;
            CHECK((d.patch(0).eval(x, y) - e.patch(0).eval(x, y)).norm() <= 1e-14);
        }
    std::remove(path.c_str());

    // five-patch round trip keeps the topology
    MultiPatchDomain f = builtin_domain("F");
    save_geometry(f, "/tmp/mdcol_test_F.json");
    MultiPatchDomain f2 = load_geometry("/tmp/mdcol_test_F.json");
    CHECK(f2.inner_edges().size() == 5);
    std::remove("/tmp/mdcol_test_F.json");
}

TEST_CASE("folded bilinear quad is rejected") {
    auto r = [](std::int64_t n) { return Rational(n); };
    // corners reordered so the quad self-intersects
    Patch folded = Patch::bilinear({{{r(0), r(0)}, {r(1), r(1)}, {r(0), r(1)}, {r(1), r(0)}}});
    CHECK_THROWS_WITH_AS(MultiPatchDomain::build({folded}),
                         doctest::Contains("singular or folded"), std::runtime_error);
}

TEST_CASE("hand-written two-square geometry file") {
    const char* text = R"({
      "patches": [
        {"type": "bilinear", "corners": [[-1, 0], [0, 0], [0, 1], [-1, 1]]},
        {"type": "bilinear", "corners": [[0, 0], [1, 0], [1, 1], [0, 1]]}
      ],
      "inner_edges": [
        {"patch_a": 0, "side_a": "right", "patch_b": 1, "side_b": "left", "reversed": false}
      ]
    })";
    std::string path = "/tmp/mdcol_two_squares.json";
    {
        std::FILE* fp = std::fopen(path.c_str(), "w");
        std::fputs(text, fp);
        std::fclose(fp);
    }
    MultiPatchDomain d = load_geometry(path);
    CHECK(d.inner_edges().size() == 1);
    EdgeFrame fr = edge_frame(d, d.inner_edges()[0]);
    CHECK(fr.glue.lambda == doctest::Approx(1.0).epsilon(1e-12));
    std::remove(path.c_str());
}
