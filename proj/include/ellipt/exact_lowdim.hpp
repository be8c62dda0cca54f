#pragma once

#include <optional>

#include "ellipt/ellipse.hpp"

namespace ellipt {

/// Canonical union of disjoint open intervals over the extended line of
/// slopes y/x.  The vertical direction x = 0 is the point at infinity.
struct SlopeSet {
    std::vector<std::pair<double, double>> intervals;  // open, sorted, disjoint
    bool include_inf = false;

    bool empty() const { return intervals.empty() && !include_inf; }
};

/// Solution set of A t^2 + 2 B t + C > 0 over the slope line; the point at
/// infinity belongs iff A > 0.
SlopeSet slope_solutions(double A, double B, double C);
SlopeSet intersect(const SlopeSet& s1, const SlopeSet& s2);

struct ExactDecision {
    bool inside = false;
    std::optional<Vec> witness;  // separating direction when not inside
};

/// Exact decision of E0 in co{E_1..E_N} for d = 2 via the per-ellipse slope
/// intervals; O(N) interval work.
ExactDecision decide_ee_2d_ex(const Ellipse& e0, const EllipticPolytope& p);
bool decide_ee_2d(const Ellipse& e0, const EllipticPolytope& p);

/// Exact decision for d = 3: for each of the three de-homogenizations the
/// candidate set (origin, pairwise quadric intersections, per-quadric
/// distance minimizers) is exhausted against f_k + eps <= 0.
/// eps < 0 selects the default 1e-9 * max_grid support(E0)^2.
/// Throws std::runtime_error if a root-polish residual exceeds 1e-7.
ExactDecision decide_ee_3d_ex(const Ellipse& e0, const EllipticPolytope& p, double eps = -1.0);
bool decide_ee_3d(const Ellipse& e0, const EllipticPolytope& p, double eps = -1.0);

double default_eps_3d(const Ellipse& e0);

}  // namespace ellipt
