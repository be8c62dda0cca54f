#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ellipt/exact_lowdim.hpp"

using namespace ellipt;

namespace {
constexpr double kPi = std::numbers::pi;

Vec v2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}
Vec v3(double x, double y, double z) {
    Vec v(3);
    v << x, y, z;
    return v;
}

Ellipse unit_disc() { return Ellipse(v2(1, 0), v2(0, 1)); }

// angular-grid separation oracle for d = 2: "margin positive somewhere on the
// grid" proves outside; the exact decider must then agree
double best_margin_2d(const Ellipse& e0, const EllipticPolytope& p, int steps = 100000) {
    double best = -kInf;
    for (int i = 0; i < steps; ++i) {
        const double phi = kPi * i / steps;  // symmetric margins: half circle suffices
        best = std::max(best, separation_margin(e0, p, v2(std::cos(phi), std::sin(phi))));
    }
    return best;
}

double best_margin_3d(const Ellipse& e0, const EllipticPolytope& p, int steps = 10000) {
    std::mt19937_64 rng(123);
    std::normal_distribution<double> g;
    double best = -kInf;
    for (int i = 0; i < steps; ++i) {
        Vec x = v3(g(rng), g(rng), g(rng));
        if (x.norm() < 1e-9) continue;
        best = std::max(best, separation_margin(e0, p, Vec(x / x.norm())));
    }
    return best;
}

Ellipse random_ellipse(int d, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g;
    Vec a(d), b(d);
    for (int i = 0; i < d; ++i) {
        a[i] = scale * g(rng);
        b[i] = scale * g(rng);
    }
    return Ellipse(a, b);
}

}  // namespace

TEST_CASE("slope solution sets") {
    SUBCASE("downward parabola gives one interval") {
        SlopeSet s = slope_solutions(-1.0, 0.0, 1.0);  // 1 - t^2 > 0
        REQUIRE(s.intervals.size() == 1);
        CHECK(s.intervals[0].first == doctest::Approx(-1.0));
        CHECK(s.intervals[0].second == doctest::Approx(1.0));
        CHECK_FALSE(s.include_inf);
    }
    SUBCASE("upward parabola gives two rays plus infinity") {
        SlopeSet s = slope_solutions(1.0, 0.0, -1.0);  // t^2 - 1 > 0
        REQUIRE(s.intervals.size() == 2);
        CHECK(s.include_inf);
    }
    SUBCASE("no solutions") {
        CHECK(slope_solutions(-1.0, 0.0, -1.0).empty());
        CHECK(slope_solutions(0.0, 0.0, -1.0).empty());
        CHECK(slope_solutions(0.0, 0.0, 0.0).empty());
    }
    SUBCASE("linear case is a ray") {
        SlopeSet s = slope_solutions(0.0, 1.0, -2.0);  // 2t - 2 > 0
        REQUIRE(s.intervals.size() == 1);
        CHECK(s.intervals[0].first == doctest::Approx(1.0));
        CHECK(s.intervals[0].second == kInf);
    }
    SUBCASE("intersection bookkeeping") {
        SlopeSet a = slope_solutions(-1.0, 0.0, 4.0);   // (-2, 2)
        SlopeSet b = slope_solutions(0.0, 1.0, 0.0);    // (0, inf)
        SlopeSet c = intersect(a, b);
        REQUIRE(c.intervals.size() == 1);
        CHECK(c.intervals[0].first == doctest::Approx(0.0));
        CHECK(c.intervals[0].second == doctest::Approx(2.0));
    }
}

TEST_CASE("decide_ee_2d on the worked examples") {
    EllipticPolytope disc({unit_disc()});
    CHECK(decide_ee_2d(Ellipse(v2(0.5, 0), v2(0, 0.5)), disc));
    CHECK_FALSE(decide_ee_2d(Ellipse(v2(1.5, 0), v2(0, 0)), disc));
    // same disc written with swapped conjugate radii
    CHECK(decide_ee_2d(unit_disc(), EllipticPolytope({Ellipse(v2(0, 1), v2(1, 0))})));
    // member of the family
    Ellipse e(v2(2, 1), v2(0, 1));
    CHECK(decide_ee_2d(e, EllipticPolytope({e, unit_disc()})));
}

TEST_CASE("decide_ee_2d returns a verified separating direction") {
    EllipticPolytope disc({unit_disc()});
    ExactDecision dec = decide_ee_2d_ex(Ellipse(v2(1.5, 0), v2(0, 0)), disc);
    REQUIRE_FALSE(dec.inside);
    REQUIRE(dec.witness.has_value());
    CHECK(separation_margin(Ellipse(v2(1.5, 0), v2(0, 0)), disc, *dec.witness) > 0.0);
}

TEST_CASE("decide_ee_2d agrees with the angular-grid oracle") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int rep = 0; rep < 200; ++rep) {
        Ellipse e0 = random_ellipse(2, rng, 0.6);
        std::vector<Ellipse> es;
        const int N = 1 + static_cast<int>(rng() % 5);
        for (int k = 0; k < N; ++k) es.push_back(random_ellipse(2, rng));
        EllipticPolytope p(std::move(es));
        const double margin = best_margin_2d(e0, p, 20000);
        if (std::abs(margin) < 1e-6) continue;  // grid cannot certify near-boundary
        ++checked;
        CHECK(decide_ee_2d(e0, p) == (margin < 0.0));
    }
    CHECK(checked > 150);
}

TEST_CASE("decide_ee_3d on the worked examples") {
    std::vector<Ellipse> frame{Ellipse(v3(1, 0, 0), v3(0, 1, 0)),
                               Ellipse(v3(0, 1, 0), v3(0, 0, 1)),
                               Ellipse(v3(1, 0, 0), v3(0, 0, 1))};
    EllipticPolytope p(frame);
    SUBCASE("shrunk coordinate circle inside the three-circle frame") {
        Ellipse e0(v3(0.5, 0, 0), v3(0, 0.5, 0));
        // direction-grid oracle confirms no separating direction
        CHECK(best_margin_3d(e0, p) < 0.0);
        CHECK(decide_ee_3d(e0, p));
    }
    SUBCASE("long segment along e3 sticks out") {
        Ellipse e0(v3(0, 0, 2), v3(0, 0, 0));
        CHECK(separation_margin(e0, p, v3(0, 0, 1)) == doctest::Approx(3.0));
        CHECK_FALSE(decide_ee_3d(e0, p));
    }
    SUBCASE("member of the family") {
        CHECK(decide_ee_3d(frame[0], p));
    }
    SUBCASE("witness is verified") {
        ExactDecision dec = decide_ee_3d_ex(Ellipse(v3(0, 0, 2), v3(0, 0, 0)), p);
        REQUIRE_FALSE(dec.inside);
        REQUIRE(dec.witness.has_value());
        CHECK(separation_margin(Ellipse(v3(0, 0, 2), v3(0, 0, 0)), p, *dec.witness) > 0.0);
    }
}

TEST_CASE("decide_ee_3d finds separators in every de-homogenization chart") {
    // instance whose only separating directions have zero third coordinate:
    // E0 sticks out along e1 while everything is tight in z
    std::vector<Ellipse> es{Ellipse(v3(1, 0, 0), v3(0, 1, 0)),
                            Ellipse(v3(0, 0, 1), v3(0, 0, 0))};
    EllipticPolytope p(es);
    Ellipse e0(v3(1.2, 0, 0), v3(0, 0, 0));
    CHECK(separation_margin(e0, p, v3(1, 0, 0)) > 0.0);
    CHECK_FALSE(decide_ee_3d(e0, p));
}

TEST_CASE("decide_ee_3d against the sphere-grid oracle on random instances") {
    // the grid proves outside when it finds a positive margin; the converse
    // direction is certified through the witness the decider must emit
    std::mt19937_64 rng(77);
    int grid_outside = 0, exact_outside = 0;
    for (int rep = 0; rep < 60; ++rep) {
        Ellipse e0 = random_ellipse(3, rng, 0.55);
        std::vector<Ellipse> es;
        const int N = 2 + static_cast<int>(rng() % 3);
        for (int k = 0; k < N; ++k) es.push_back(random_ellipse(3, rng));
        EllipticPolytope p(std::move(es));
        const double margin = best_margin_3d(e0, p, 20000);
        ExactDecision dec = decide_ee_3d_ex(e0, p);
        if (margin > 1e-6) {
            ++grid_outside;
            CHECK_FALSE(dec.inside);
        }
        if (!dec.inside) {
            ++exact_outside;
            REQUIRE(dec.witness.has_value());
            CHECK(separation_margin(e0, p, *dec.witness) > 0.0);
        }
    }
    CHECK(grid_outside > 10);
    CHECK(exact_outside >= grid_outside);
}

TEST_CASE("shrink monotonicity") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 30; ++rep) {
        const int d = 2 + static_cast<int>(rng() % 2);
        Ellipse e0 = random_ellipse(d, rng, 0.8);
        std::vector<Ellipse> es;
        for (int k = 0; k < 3; ++k) es.push_back(random_ellipse(d, rng));
        EllipticPolytope p(std::move(es));
        auto dec = [&](const Ellipse& e) {
            return d == 2 ? decide_ee_2d(e, p) : decide_ee_3d(e, p);
        };
        if (!dec(e0)) continue;
        for (double lam : {0.9, 0.5, 0.17}) {
            CHECK(dec(Ellipse(Vec(lam * e0.a()), Vec(lam * e0.b()))));
        }
    }
}
