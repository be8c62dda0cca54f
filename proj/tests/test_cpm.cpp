#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ellipt/complex_polytope.hpp"
#include "ellipt/corner_cutting.hpp"
#include "ellipt/exact_lowdim.hpp"

using namespace ellipt;

namespace {
constexpr double kPi = std::numbers::pi;

Vec v2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

Ellipse unit_disc() { return Ellipse(v2(1, 0), v2(0, 1)); }

// the instance of the closure proposition: E0 and E1 are both the unit disc,
// but v1 has the conjugate radii swapped
Ellipse swapped_disc() { return Ellipse(v2(0, 1), v2(1, 0)); }

Ellipse random_ellipse(int d, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g;
    Vec a(d), b(d);
    for (int i = 0; i < d; ++i) {
        a[i] = scale * g(rng);
        b[i] = scale * g(rng);
    }
    return Ellipse(a, b);
}

// grid search over balanced combinations z1 v1 + z2 conj(v1) with
// |z1| + |z2| <= 1 for the largest real t with t v0 hit (coarse oracle)
double brute_force_t0(const CVec& v0, const CVec& v1, int steps) {
    const CVec cv = v1.conjugate();
    double best = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double r1 = static_cast<double>(i) / steps;
        for (int j = 0; i + j <= steps; ++j) {
            const double r2 = static_cast<double>(j) / steps;
            for (int pi1 = 0; pi1 < 4 * steps; ++pi1) {
                const std::complex<double> z1 = std::polar(r1, 2.0 * kPi * pi1 / (4 * steps));
                for (int pi2 = 0; pi2 < 4 * steps; ++pi2) {
                    const std::complex<double> z2 = std::polar(r2, 2.0 * kPi * pi2 / (4 * steps));
                    const CVec lhs = z1 * v1 + z2 * cv;
                    const std::complex<double> t = v0.dot(lhs) / v0.squaredNorm();
                    if (std::abs(t.imag()) > 1e-3 || t.real() < best) continue;
                    if ((lhs - t.real() * v0).norm() < 2e-2) best = t.real();
                }
            }
        }
    }
    return best;
}

}  // namespace

TEST_CASE("closure proposition instance: factor zero without conjugates") {
    EllipticPolytope p({swapped_disc()});
    CpmResult no_closure = cpm_value(unit_disc(), p, false);
    CHECK(no_closure.t0_max <= 1e-7);

    CpmResult with_closure = cpm_value(unit_disc(), p, true);
    CHECK(with_closure.t0_max == doctest::Approx(1.0).epsilon(1e-6));
    // the optimal combination is z2 = i on conj(v1)
    REQUIRE(with_closure.coeffs.size() == 2);
    CHECK(std::abs(with_closure.coeffs[1] - std::complex<double>(0.0, 1.0)) < 1e-4);
    // reproduce v0 exactly from the coefficients
    const CVec v0 = unit_disc().complex();
    const CVec v1 = swapped_disc().complex();
    const CVec rebuilt = with_closure.coeffs[0] * v1 + with_closure.coeffs[1] * v1.conjugate();
    CHECK((rebuilt - with_closure.t0_max * v0).norm() < 1e-5);
    // coarse grid search over the balanced combinations agrees
    CHECK(brute_force_t0(v0, v1, 24) == doctest::Approx(1.0).epsilon(5e-2));
}

TEST_CASE("member ellipse reaches t0 >= 1") {
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 10; ++rep) {
        const int d = 2 + static_cast<int>(rng() % 3);
        std::vector<Ellipse> es;
        for (int k = 0; k < 3; ++k) es.push_back(random_ellipse(d, rng));
        EllipticPolytope p(es);
        CpmResult res = cpm_value(es[0], p);
        CHECK(res.t0_max >= 1.0 - 1e-6);
    }
}

TEST_CASE("conjugate closure can only enlarge the feasible set") {
    std::mt19937_64 rng(43);
    for (int rep = 0; rep < 20; ++rep) {
        const int d = 2 + static_cast<int>(rng() % 3);
        Ellipse e0 = random_ellipse(d, rng, 0.7);
        std::vector<Ellipse> es;
        for (int k = 0; k < 1 + static_cast<int>(rng() % 4); ++k) {
            es.push_back(random_ellipse(d, rng));
        }
        EllipticPolytope p(std::move(es));
        const double with = cpm_value(e0, p, true).t0_max;
        const double without = cpm_value(e0, p, false).t0_max;
        CHECK(with >= without - 1e-6);
    }
}

TEST_CASE("cpm value is invariant under elliptic rotations and conjugation") {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    for (int rep = 0; rep < 8; ++rep) {
        const int d = 3;
        Ellipse e0 = random_ellipse(d, rng, 0.7);
        std::vector<Ellipse> es;
        for (int k = 0; k < 3; ++k) es.push_back(random_ellipse(d, rng));
        const double base = cpm_value(e0, EllipticPolytope(es)).t0_max;

        std::vector<Ellipse> rotated;
        for (const Ellipse& e : es) rotated.push_back(elliptic_rotate(e, ang(rng)));
        CHECK(cpm_value(elliptic_rotate(e0, ang(rng)), EllipticPolytope(rotated)).t0_max ==
              doctest::Approx(base).epsilon(1e-5));

        std::vector<Ellipse> conjugated;
        for (const Ellipse& e : es) conjugated.push_back(Ellipse(e.a(), Vec(-e.b())));
        CHECK(cpm_value(e0, EllipticPolytope(conjugated)).t0_max ==
              doctest::Approx(base).epsilon(1e-5));
    }
}

TEST_CASE("cpm decide thresholds") {
    EllipticPolytope disc({unit_disc()});
    SUBCASE("well inside") {
        Ellipse e0(v2(0.6, 0), v2(0, 0.6));
        EeVerdict v = cpm_decide(e0, disc);
        CHECK(v.outcome == EeOutcome::Inside);
        CHECK(v.factor == doctest::Approx(1.0));
    }
    SUBCASE("far outside") {
        Ellipse e0(v2(2.5, 0), v2(0, 2.5));  // t0 = 0.4 < 1/2
        EeVerdict v = cpm_decide(e0, disc);
        CHECK(v.outcome == EeOutcome::Outside);
        REQUIRE(v.direction.has_value());
        CHECK(separation_margin(e0, disc, *v.direction) > 0.0);
    }
    SUBCASE("in between certifies the scaled inclusion") {
        Ellipse e0(v2(1.4, 0), v2(0, 1.4));  // t0 ~ 0.714
        EeVerdict v = cpm_decide(e0, disc);
        CHECK(v.outcome == EeOutcome::QInside);
        CHECK(v.factor == doctest::Approx(1.0 / 1.4).epsilon(1e-4));
    }
}

TEST_CASE("soundness: t0 >= 1 implies boundary points have norm at most one") {
    std::mt19937_64 rng(45);
    int hits = 0;
    for (int rep = 0; rep < 30 && hits < 5; ++rep) {
        const int d = 2 + static_cast<int>(rng() % 2);
        Ellipse e0 = random_ellipse(d, rng, 0.35);
        std::vector<Ellipse> es;
        for (int k = 0; k < 3; ++k) es.push_back(random_ellipse(d, rng));
        EllipticPolytope p(std::move(es));
        if (cpm_value(e0, p).t0_max < 1.0) continue;
        ++hits;
        for (int i = 0; i < 720; ++i) {
            const Vec w = e0.point(2.0 * kPi * i / 720);
            NormBracket nb = pe_norm_socp(w, p);
            REQUIRE_FALSE(nb.outside_span);
            CHECK(nb.lo <= 1.0 + 1e-5);
        }
    }
    CHECK(hits >= 5);
}

TEST_CASE("factor bound: t0 < 1/2 instances are confirmed outside exactly") {
    std::mt19937_64 rng(46);
    int hits = 0;
    for (int rep = 0; rep < 60 && hits < 8; ++rep) {
        const int d = 2;
        Ellipse e0 = random_ellipse(d, rng, 1.4);
        std::vector<Ellipse> es;
        for (int k = 0; k < 2; ++k) es.push_back(random_ellipse(d, rng, 0.6));
        EllipticPolytope p(std::move(es));
        if (cpm_value(e0, p).t0_max >= 0.5) continue;
        ++hits;
        CHECK_FALSE(decide_ee_2d(e0, p));
    }
    CHECK(hits >= 8);
}
