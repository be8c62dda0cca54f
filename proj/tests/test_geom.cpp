#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ellipt/ellipse.hpp"

using namespace ellipt;
namespace {
constexpr double kPi = std::numbers::pi;

Vec v2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

Ellipse unit_disc() { return Ellipse(v2(1, 0), v2(0, 1)); }

// slow oracle: max over a parameter grid of (x, a cos t + b sin t)
double support_grid_oracle(const Ellipse& e, const Vec& x, int steps = 20000) {
    double best = -kInf;
    for (int i = 0; i < steps; ++i) {
        const double t = 2.0 * kPi * i / steps;
        best = std::max(best, x.dot(e.point(t)));
    }
    return best;
}

}  // namespace

TEST_CASE("support closed form") {
    CHECK(support(unit_disc(), v2(3, 4)) == doctest::Approx(5.0));
    CHECK(support(Ellipse(v2(2, 0), v2(0, 0)), v2(0, 1)) == doctest::Approx(0.0));
    CHECK(support(Ellipse(v2(2, 0), v2(0, 1)), v2(1, 1)) == doctest::Approx(std::sqrt(5.0)));
    CHECK_THROWS_AS(support(unit_disc(), Vec::Ones(3)), std::invalid_argument);
}

TEST_CASE("support matches the parameter-grid oracle") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 20; ++rep) {
        const int d = 2 + rep % 4;
        Vec a(d), b(d), x(d);
        for (int i = 0; i < d; ++i) {
            a[i] = g(rng);
            b[i] = g(rng);
            x[i] = g(rng);
        }
        Ellipse e(a, b);
        CHECK(support(e, x) == doctest::Approx(support_grid_oracle(e, x)).epsilon(1e-6));
    }
}

TEST_CASE("support homogeneity") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 50; ++rep) {
        Vec a(3), b(3), x(3);
        for (int i = 0; i < 3; ++i) {
            a[i] = g(rng);
            b[i] = g(rng);
            x[i] = g(rng);
        }
        Ellipse e(a, b);
        const double lam = std::abs(g(rng));
        const double lhs = support(e, Vec(lam * x));
        const double rhs = lam * support(e, x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("elliptic rotation") {
    SUBCASE("identity at s = 0") {
        Ellipse e(v2(2, 0), v2(0, 1));
        Ellipse r = elliptic_rotate(e, 0.0);
        CHECK(r.a() == e.a());
        CHECK(r.b() == e.b());
    }
    SUBCASE("quarter turn of the disc") {
        Ellipse r = elliptic_rotate(unit_disc(), 0.5 * kPi);
        CHECK(r.a()[0] == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(r.a()[1] == doctest::Approx(1.0));
        CHECK(r.b()[0] == doctest::Approx(-1.0));
        for (const Vec& x : direction_grid(2, 32)) {
            CHECK(support(r, x) == doctest::Approx(support(unit_disc(), x)).epsilon(1e-10));
        }
    }
    SUBCASE("s = pi/4 conjugate radii") {
        Ellipse e(v2(2, 0), v2(0, 1));
        Ellipse r = elliptic_rotate(e, 0.25 * kPi);
        CHECK(r.a()[0] == doctest::Approx(std::sqrt(2.0)));
        CHECK(r.a()[1] == doctest::Approx(0.5 * std::sqrt(2.0)));
        // support preserved on a 360-point direction grid
        for (int k = 0; k < 360; ++k) {
            const double phi = 2.0 * kPi * k / 360;
            const Vec x = v2(std::cos(phi), std::sin(phi));
            CHECK(support(r, x) == doctest::Approx(support(e, x)).epsilon(1e-10));
        }
    }
    SUBCASE("support invariant under random rotations") {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> g;
        for (int rep = 0; rep < 20; ++rep) {
            Vec a(4), b(4);
            for (int i = 0; i < 4; ++i) {
                a[i] = g(rng);
                b[i] = g(rng);
            }
            Ellipse e(a, b);
            Ellipse r = elliptic_rotate(e, g(rng));
            for (const Vec& x : direction_grid(4, 16)) {
                CHECK(support(r, x) == doctest::Approx(support(e, x)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("conjugate-radius exchange leaves the set unchanged") {
    Ellipse e(v2(2, 1), v2(-1, 3));
    Ellipse swapped(v2(-1, 3), v2(2, 1));
    for (const Vec& x : direction_grid(2, 64)) {
        CHECK(support(e, x) == doctest::Approx(support(swapped, x)).epsilon(1e-12));
    }
    CHECK(same_ellipse(e, swapped));
}

TEST_CASE("separation margin") {
    EllipticPolytope p({unit_disc()});
    SUBCASE("identical sets") {
        for (const Vec& x : direction_grid(2, 16)) {
            CHECK(separation_margin(unit_disc(), p, x) == doctest::Approx(0.0).epsilon(1e-14));
        }
    }
    SUBCASE("long segment sticks out") {
        Ellipse seg(v2(1.5, 0), v2(0, 0));
        CHECK(separation_margin(seg, p, v2(1, 0)) == doctest::Approx(1.25));
    }
    SUBCASE("small disc strictly inside") {
        Ellipse small(v2(0.5, 0), v2(0, 0.5));
        CHECK(separation_margin(small, p, v2(0, 1)) < 0.0);
    }
}

TEST_CASE("degenerate pair reduces to a segment") {
    Vec a = v2(1, 1), b = v2(2, 2);  // b = 2a exactly
    Ellipse e(a, b);
    CHECK(e.b().norm() == 0.0);
    CHECK(e.major_radius() == doctest::Approx(std::sqrt(10.0)));
    // near-degenerate stays as given
    Ellipse near(v2(1, 1), v2(2, 2 + 1e-13));
    CHECK(near.b().norm() > 0.0);
}

TEST_CASE("major radius closed form") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 20; ++rep) {
        Vec a(3), b(3);
        for (int i = 0; i < 3; ++i) {
            a[i] = g(rng);
            b[i] = g(rng);
        }
        Ellipse e(a, b);
        double best = 0.0;
        for (int i = 0; i < 10000; ++i) best = std::max(best, e.point(2.0 * kPi * i / 10000).norm());
        CHECK(e.major_radius() == doctest::Approx(best).epsilon(1e-6));
    }
}

TEST_CASE("conjugate closure") {
    CVec v(2);
    v << std::complex<double>(1, 0), std::complex<double>(0, 1);  // e1 + i e2
    SUBCASE("adds the missing conjugate") {
        ComplexVertexSet s{{v}, false};
        ComplexVertexSet c = conjugate_closure(s);
        REQUIRE(c.vertices.size() == 2);
        CHECK(c.self_conjugate);
        CHECK((c.vertices[1] - v.conjugate()).norm() == doctest::Approx(0.0));
    }
    SUBCASE("already self-conjugate set unchanged up to order") {
        ComplexVertexSet s{{v, v.conjugate()}, false};
        CHECK(conjugate_closure(s).vertices.size() == 2);
    }
    SUBCASE("real vertex kept as a single copy") {
        CVec r(2);
        r << 1.0, 2.0;
        ComplexVertexSet s{{r}, false};
        CHECK(conjugate_closure(s).vertices.size() == 1);
    }
}

TEST_CASE("ellipse set equality") {
    SUBCASE("swapped-radii disc is the same disc") {
        CHECK(same_ellipse(unit_disc(), Ellipse(v2(0, 1), v2(1, 0))));
    }
    SUBCASE("rotated parametrization is the same set") {
        Ellipse e(v2(2, 1), v2(0, 1));
        CHECK(same_ellipse(e, elliptic_rotate(e, 0.37)));
        CHECK(same_ellipse(e, elliptic_rotate(e, -2.2)));
    }
    SUBCASE("different sets differ") {
        CHECK_FALSE(same_ellipse(unit_disc(), Ellipse(v2(1.001, 0), v2(0, 1))));
        CHECK_FALSE(same_ellipse(unit_disc(), Ellipse(v2(1, 0), v2(0, 0))));
    }
}

TEST_CASE("polytope construction checks") {
    CHECK_THROWS_AS(EllipticPolytope({}), std::invalid_argument);
    CHECK_THROWS_AS(EllipticPolytope({unit_disc(), Ellipse(Vec::Ones(3), Vec::Zero(3))}),
                    std::invalid_argument);
    EllipticPolytope p({unit_disc(), Ellipse(v2(2, 0), v2(0, 0))});
    CHECK(p.support(v2(1, 0)) == doctest::Approx(2.0));
    CHECK(p.support(v2(0, 1)) == doctest::Approx(1.0));
}
