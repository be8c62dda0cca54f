#pragma once

#include <functional>

#include "ellipt/coneprog.hpp"
#include "ellipt/ee_verdict.hpp"

namespace ellipt {

/// Arc of the upper unit semicircle in the parameter t of E0; length is
/// 2^{-level} pi.
struct Arc {
    double start = 0.0;
    double end = 0.0;
    int level = 1;

    double len() const { return end - start; }
    double mid() const { return 0.5 * (start + end); }
};

/// Intersection point of the two tangents of E0 at the ends of the arc:
/// w = (1/cos(len/2)) (a0 cos(mid) + b0 sin(mid)).  Requires len < pi.
Vec corner_point(const Ellipse& e0, const Arc& arc);

/// Certified interval [lo, hi] containing ||w||_P.  outside_span flags
/// w not in span(P) (norm +inf semantics).
struct NormBracket {
    double lo = 0.0;
    double hi = 0.0;
    Vec dual;  // direction y with (w,y) ~ value and support(E_j,y) bounded
    bool outside_span = false;
};

/// ||w||_P by the conic program min sum r_j, sum(c_j a_j + s_j b_j) = w,
/// |(c_j,s_j)| <= r_j.  Bracket width <= tol.
NormBracket pe_norm_socp(const Vec& w, const EllipticPolytope& p, double tol = 1e-6);

using NormOracle = std::function<NormBracket(const Vec&)>;

struct CutOptions {
    double target_factor = 0.995;  // q in (0,1)
    int max_iter = 200;            // J
    double boundary_tol = 1e-7;    // nu <= 1 + boundary_tol counts as Inside
    double oracle_factor = 1.0;    // cos(2^-n pi) when the norm oracle is the LP one
};

struct CutStats {
    std::vector<double> nu_history;                    // nonincreasing
    std::vector<std::pair<int, int>> level_iteration;  // level -> iteration first reached
    int iterations = 0;
};

/// Adaptive corner cutting over the upper semicircle; two initial
/// quarter-circle arcs, the arc of largest corner norm is split each
/// iteration.  Stops Inside when all corner norms are <= 1 + tol, Outside
/// on a certified tangent point of norm > 1, QInside at the target factor.
EeVerdict cut_decide(const Ellipse& e0, const EllipticPolytope& p, const CutOptions& opts,
                     const NormOracle& oracle, CutStats* stats = nullptr);
EeVerdict cut_decide(const Ellipse& e0, const EllipticPolytope& p,
                     const CutOptions& opts = CutOptions{}, CutStats* stats = nullptr);

struct EllipseNormBracket {
    double lo = 0.0;
    double hi = 0.0;
    bool outside_span = false;
};

/// Brackets max_{w in E0} ||w||_P by the same arc refinement: polygon
/// vertices bound it from above, tangency points from below.  Refines until
/// lo/hi >= rel_target.
EllipseNormBracket ellipse_norm_bracket(const Ellipse& e0, const EllipticPolytope& p,
                                        double rel_target, int max_iter,
                                        const NormOracle& oracle);
EllipseNormBracket ellipse_norm_bracket(const Ellipse& e0, const EllipticPolytope& p,
                                        double rel_target = 0.999, int max_iter = 400);

}  // namespace ellipt
