#include <doctest.h>

#include <cstring>
#include <random>

#include "ellipt/coneprog.hpp"
#include "ellipt/linprog.hpp"

using namespace ellipt;

namespace {

LinearProgram lp_bounds_only() {
    LinearProgram lp;
    lp.c = Vec::Ones(1);
    lp.lower = Vec::Ones(1);  // x >= 1
    lp.upper = Vec::Constant(1, kInf);
    return lp;
}

// min sum mu, sum mu_i v_i = w over the 4 vertices of the cross polytope
double square_membership_oracle(double wx, double wy) {
    // exhaustive over pairs of vertices (the optimum uses at most 2 of them)
    const double vx[4] = {1, -1, 0, 0};
    const double vy[4] = {0, 0, 1, -1};
    double best = kInf;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double det = vx[i] * vy[j] - vx[j] * vy[i];
            if (std::abs(det) < 1e-12) continue;
            const double ri = (wx * vy[j] - wy * vx[j]) / det;
            const double rj = (vx[i] * wy - vy[i] * wx) / det;
            if (ri >= -1e-12 && rj >= -1e-12) best = std::min(best, ri + rj);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("lp: min x subject to x >= 1") {
    SUBCASE("as a variable bound") {
        SolveReport rep = solve_lp(lp_bounds_only());
        CHECK(rep.status == SolveStatus::Optimal);
        CHECK(rep.value == doctest::Approx(1.0));
    }
    SUBCASE("as an inequality row") {
        LinearProgram lp;
        lp.c = Vec::Ones(1);
        lp.A_ub = -Mat::Ones(1, 1);
        lp.b_ub = -Vec::Ones(1);
        SolveReport rep = solve_lp(lp);
        CHECK(rep.status == SolveStatus::Optimal);
        CHECK(rep.value == doctest::Approx(1.0));
    }
}

TEST_CASE("lp: min x+y on the simplex slice") {
    LinearProgram lp;
    lp.c = Vec::Ones(2);
    lp.A_eq = Mat::Ones(1, 2);
    lp.b_eq = Vec::Constant(1, 2.0);
    lp.lower = Vec::Zero(2);
    lp.upper = Vec::Constant(2, kInf);
    SolveReport rep = solve_lp(lp);
    CHECK(rep.status == SolveStatus::Optimal);
    CHECK(rep.value == doctest::Approx(2.0));
    CHECK(rep.primal_residual < 1e-9);
}

TEST_CASE("lp: membership in the cross polytope hull") {
    // min sum mu, sum mu_i v_i = (1,1), mu >= 0 over vertices (+-1,0),(0,+-1)
    LinearProgram lp;
    lp.c = Vec::Ones(4);
    lp.A_eq = Mat::Zero(2, 4);
    lp.A_eq << 1, -1, 0, 0, 0, 0, 1, -1;
    lp.b_eq = Vec::Ones(2);
    lp.lower = Vec::Zero(4);
    lp.upper = Vec::Constant(4, kInf);
    SolveReport rep = solve_lp(lp);
    CHECK(rep.status == SolveStatus::Optimal);
    CHECK(rep.value == doctest::Approx(square_membership_oracle(1.0, 1.0)));
    CHECK(rep.value == doctest::Approx(2.0));
}

TEST_CASE("lp: infeasible and unbounded are reported, never clamped") {
    LinearProgram bad;
    bad.c = Vec::Ones(1);
    bad.A_ub = Mat::Ones(1, 1);
    bad.b_ub = -Vec::Ones(1);  // x <= -1
    bad.lower = Vec::Zero(1);
    bad.upper = Vec::Constant(1, kInf);
    CHECK(solve_lp(bad).status == SolveStatus::Infeasible);

    LinearProgram unb;
    unb.c = -Vec::Ones(1);
    unb.lower = Vec::Zero(1);
    unb.upper = Vec::Constant(1, kInf);
    CHECK(solve_lp(unb).status == SolveStatus::Unbounded);
}

TEST_CASE("lp: Beale's cycling example terminates") {
    LinearProgram lp;
    lp.c = Vec(4);
    lp.c << -0.75, 150.0, -0.02, 6.0;
    lp.A_ub = Mat(3, 4);
    lp.A_ub << 0.25, -60.0, -1.0 / 25.0, 9.0,
               0.5, -90.0, -1.0 / 50.0, 3.0,
               0.0, 0.0, 1.0, 0.0;
    lp.b_ub = Vec(3);
    lp.b_ub << 0.0, 0.0, 1.0;
    lp.lower = Vec::Zero(4);
    lp.upper = Vec::Constant(4, kInf);
    SolveReport rep = solve_lp(lp);
    CHECK(rep.status == SolveStatus::Optimal);
    CHECK(rep.value == doctest::Approx(-0.05));
}

TEST_CASE("lp: deterministic, bitwise identical reruns") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    LinearProgram lp;
    lp.c = Vec(6);
    lp.A_ub = Mat(4, 6);
    lp.b_ub = Vec(4);
    for (int i = 0; i < 6; ++i) lp.c[i] = g(rng);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 6; ++j) lp.A_ub(i, j) = g(rng);
        lp.b_ub[i] = std::abs(g(rng)) + 1.0;
    }
    lp.lower = Vec::Zero(6);
    lp.upper = Vec::Ones(6);
    SolveReport r1 = solve_lp(lp);
    SolveReport r2 = solve_lp(lp);
    REQUIRE(r1.status == r2.status);
    CHECK(std::memcmp(&r1.value, &r2.value, sizeof(double)) == 0);
    REQUIRE(r1.x.size() == r2.x.size());
    CHECK(std::memcmp(r1.x.data(), r2.x.data(), sizeof(double) * r1.x.size()) == 0);
}

TEST_CASE("lp: equality duals satisfy strong duality") {
    LinearProgram lp;
    lp.c = Vec(3);
    lp.c << 1.0, 2.0, 3.0;
    lp.A_eq = Mat(1, 3);
    lp.A_eq << 1.0, 1.0, 1.0;
    lp.b_eq = Vec::Constant(1, 5.0);
    lp.lower = Vec::Zero(3);
    lp.upper = Vec::Constant(3, kInf);
    SolveReport rep = solve_lp(lp);
    REQUIRE(rep.status == SolveStatus::Optimal);
    CHECK(rep.value == doctest::Approx(5.0));
    CHECK(rep.y_eq[0] * 5.0 == doctest::Approx(rep.value));
}

TEST_CASE("lp: warm-start basis reuse") {
    LinearProgram lp;
    lp.c = Vec(3);
    lp.c << 1.0, 1.0, 1.0;
    lp.A_eq = Mat(2, 3);
    lp.A_eq << 1, 2, 0, 0, 1, 3;
    lp.b_eq = Vec(2);
    lp.b_eq << 4.0, 6.0;
    lp.lower = Vec::Zero(3);
    lp.upper = Vec::Constant(3, kInf);
    SimplexBasis basis;
    SolveReport cold = solve_lp(lp, 1e-8, &basis);
    REQUIRE(cold.status == SolveStatus::Optimal);
    REQUIRE(basis.valid());
    lp.b_eq << 4.2, 5.7;  // same structure, new rhs
    SolveReport warm = solve_lp(lp, 1e-8, &basis);
    SolveReport fresh = solve_lp(lp, 1e-8);
    REQUIRE(warm.status == SolveStatus::Optimal);
    CHECK(warm.value == doctest::Approx(fresh.value).epsilon(1e-10));
    CHECK(warm.iterations <= fresh.iterations);
}

TEST_CASE("socp: smallest cone head over one Lorentz cone") {
    // min r s.t. |(c,s)| <= r, c = 1
    ConeProgram cp;
    cp.c = Vec::Zero(3);
    cp.c[0] = 1.0;
    cp.blocks.push_back({ConeProgram::Block::Kind::Soc, 3});
    cp.A = Mat::Zero(1, 3);
    cp.A(0, 1) = 1.0;
    cp.b = Vec::Ones(1);
    SolveReport rep = solve_socp(cp);
    CHECK(rep.status == SolveStatus::Optimal);
    CHECK(rep.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("socp: disc norm of (0.5, 0)") {
    // min r s.t. c*a + s*b = w with a = e1, b = e2
    ConeProgram cp;
    cp.c = Vec::Zero(3);
    cp.c[0] = 1.0;
    cp.blocks.push_back({ConeProgram::Block::Kind::Soc, 3});
    cp.A = Mat::Zero(2, 3);
    cp.A(0, 1) = 1.0;
    cp.A(1, 2) = 1.0;
    cp.b = Vec(2);
    cp.b << 0.5, 0.0;
    SolveReport rep = solve_socp(cp);
    CHECK(rep.status == SolveStatus::Optimal);
    CHECK(rep.value == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("socp: constructed strictly feasible pair has tiny gap") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (int rep_i = 0; rep_i < 5; ++rep_i) {
        const int n = 7;  // one nonneg block of 1, two Lorentz cones of 3
        ConeProgram cp;
        cp.blocks.push_back({ConeProgram::Block::Kind::NonNeg, 1});
        cp.blocks.push_back({ConeProgram::Block::Kind::Soc, 3});
        cp.blocks.push_back({ConeProgram::Block::Kind::Soc, 3});
        Vec xhat(n);
        xhat << 1.0, 2.0, 0.3, -0.4, 1.5, 0.2, 0.9;  // strictly interior
        Vec shat(n);
        shat << 0.7, 1.8, 0.2, 0.3, 2.2, -0.5, 1.0;  // strictly interior dual slack
        const int p = 3;
        cp.A = Mat(p, n);
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < n; ++j) cp.A(i, j) = g(rng);
        }
        Vec yhat(p);
        for (int i = 0; i < p; ++i) yhat[i] = g(rng);
        cp.b = cp.A * xhat;
        cp.c = cp.A.transpose() * yhat + shat;
        SolveReport rep = solve_socp(cp, 1e-6);
        REQUIRE(rep.status == SolveStatus::Optimal);
        CHECK(rep.gap <= 1e-5);
        CHECK(rep.primal_residual <= 1e-6);
        CHECK(rep.dual_residual <= 1e-6);
        // weak duality of the reported pair
        const double dual_obj = cp.b.dot(rep.y_eq);
        CHECK(dual_obj <= rep.value + 1e-5);
        // optimum cannot exceed the known feasible point
        CHECK(rep.value <= cp.c.dot(xhat) + 1e-6);
    }
}

TEST_CASE("socp: agrees with the simplex on pure LPs") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g;
    for (int rep_i = 0; rep_i < 8; ++rep_i) {
        const int n = 5, p = 2;
        Mat A(p, n);
        Vec xhat(n), c(n);
        for (int j = 0; j < n; ++j) xhat[j] = 0.5 + std::abs(g(rng));
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < n; ++j) A(i, j) = g(rng);
        }
        for (int j = 0; j < n; ++j) c[j] = 1.0 + std::abs(g(rng));  // bounded below
        Vec b = A * xhat;

        LinearProgram lp;
        lp.c = c;
        lp.A_eq = A;
        lp.b_eq = b;
        lp.lower = Vec::Zero(n);
        lp.upper = Vec::Constant(n, kInf);
        SolveReport lp_rep = solve_lp(lp, 1e-9);

        ConeProgram cp;
        cp.c = c;
        cp.A = A;
        cp.b = b;
        cp.blocks.push_back({ConeProgram::Block::Kind::NonNeg, n});
        SolveReport cp_rep = solve_socp(cp, 1e-8);

        if (lp_rep.status == SolveStatus::Optimal && cp_rep.status == SolveStatus::Optimal) {
            CHECK(lp_rep.value == doctest::Approx(cp_rep.value).epsilon(1e-5));
        }
    }
}

TEST_CASE("socp: deterministic reruns") {
    ConeProgram cp;
    cp.c = Vec::Zero(3);
    cp.c[0] = 1.0;
    cp.blocks.push_back({ConeProgram::Block::Kind::Soc, 3});
    cp.A = Mat::Zero(1, 3);
    cp.A(0, 1) = 1.0;
    cp.b = Vec::Ones(1);
    SolveReport r1 = solve_socp(cp);
    SolveReport r2 = solve_socp(cp);
    CHECK(std::memcmp(&r1.value, &r2.value, sizeof(double)) == 0);
    CHECK(std::memcmp(r1.x.data(), r2.x.data(), sizeof(double) * r1.x.size()) == 0);
}
