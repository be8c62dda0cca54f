#pragma once

#include "ellipt/corner_cutting.hpp"
#include "ellipt/linprog.hpp"

namespace ellipt {

/// The lifted system rT_n over variables [r, x_1..x_{2n+2}]: 3n+3 linear
/// rows whose feasible set projects (onto the last two coordinates) to the
/// regular 2^n-gon inscribed in the circle of radius r, vertex at angle 0.
/// Nonzero shears replace each reflection by a nearby affine symmetry about
/// the same line (used by the hardness construction).
struct LiftedPolygonSystem {
    int n = 0;
    std::vector<double> shears;  // size n; all zero for the regular polygon

    struct Row {
        std::vector<std::pair<int, double>> coeffs;  // (variable, value); var 0 is r
        double rhs = 0.0;
        bool equality = false;
    };
    std::vector<Row> rows;

    int num_vars() const { return 2 * n + 3; }
    int num_constraints() const { return static_cast<int>(rows.size()); }
    int num_nonzeros() const;

    /// Vertices of the projected polygon for the given radius, in angular
    /// order (2^n of them).
    std::vector<Eigen::Vector2d> polygon_vertices(double r = 1.0) const;
};

/// n >= 2 (level 1 degenerates to a segment).
LiftedPolygonSystem build_lifted_polygon(int n);
LiftedPolygonSystem build_lifted_polygon(int n, const std::vector<double>& shears);

/// Smallest level n >= 2 with cos(2^-n pi) >= q.
int level_for_factor(double q);
double level_factor(int n);  // cos(2^-n pi)

struct LiftedLpStats {
    int variables = 0;
    int constraints = 0;  // includes the objective row, matching the paper's count
    int nonzeros = 0;     // matrix plus rhs nonzeros
};

struct PeLpResult {
    NormBracket bracket;   // [r cos(2^-n pi), r]
    LiftedLpStats stats;
    SolveStatus status = SolveStatus::MaxIter;
    double lp_value = 0.0;
};

/// Problem PE by one LP over the lifted polygons of all N ellipses.
/// Size (2n+3)N variables, (3n+4)N + d + 1 constraints; infeasible iff
/// w is outside span(P).
PeLpResult pe_norm_lp_full(const Vec& w, const EllipticPolytope& p, int n,
                           double tol = 1e-8, SimplexBasis* warm = nullptr);
NormBracket pe_norm_lp(const Vec& w, const EllipticPolytope& p, int n);

struct ProjOptions {
    double target_factor = 0.995;  // combined factor q1 q2
    int level = 0;                 // 0: pick smallest level with cos(2^-n pi) >= sqrt(q)
    int max_iter = 400;
};

/// Corner cutting driven by the LP norm oracle; certified combined factor
/// cos(2^-n pi) cos(2^-m pi).
EeVerdict proj_decide(const Ellipse& e0, const EllipticPolytope& p,
                      const ProjOptions& opts = ProjOptions{}, CutStats* stats = nullptr);

}  // namespace ellipt
