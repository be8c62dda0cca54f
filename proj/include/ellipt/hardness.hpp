#pragma once

#include <cstdint>

#include "ellipt/projection.hpp"

namespace ellipt {

/// Lifted 2^n-gon with each reflection replaced by a nearby affine symmetry
/// (shear a_j about the same line).  The projection stays within eps of the
/// regular polygon while the vertex-to-origin distances become pairwise
/// distinct; r is fixed to 1, so the polyhedron lives in R^{2n+2} with at
/// most 2n+3 facets.
struct PerturbedLift {
    int n = 0;
    std::vector<double> shears;
    LiftedPolygonSystem system;
    std::vector<Eigen::Vector2d> projected_vertices;  // 2^n, angular order
    double hausdorff_to_regular = 0.0;
    double min_distance_gap = 0.0;  // min pairwise gap of vertex distances

    int facet_count() const;  // inequality rows
};

/// Constructive proof object: shears resampled (at most 100 times) until the
/// projected vertex distances are pairwise distinct and the polygon is within
/// eps of the regular one.
PerturbedLift build_perturbed_lift(int n, double eps, std::uint64_t seed);

/// Same construction with prescribed shears (all-zero gives the regular
/// polygon control case); no distinctness requirement.
PerturbedLift build_lift_with_shears(int n, const std::vector<double>& shears);

struct LocalMaximaCount {
    int count = 0;                        // vertices that beat both neighbours
    std::vector<double> distinct_values;  // sorted distinct squared distances
};

/// Local maxima of x_{2n+1}^2 + x_{2n+2}^2 over the projected polygon,
/// tested combinatorially against the two polygon neighbours.
LocalMaximaCount count_local_maxima(const PerturbedLift& lift);

/// Hausdorff distance between two convex polygons given by vertex lists.
double polygon_hausdorff(const std::vector<Eigen::Vector2d>& a,
                         const std::vector<Eigen::Vector2d>& b);

struct QpReduction {
    Ellipse e0;
    EllipticPolytope p;
};

/// Maximizing a rank-2 psd form over { x : (x,h_k)^2 <= 1 } as an EE
/// instance: a_k = h_k cos t_k, b_k = h_k sin t_k, the form factored as
/// (x,a0)^2 + (x,b0)^2.  Requires t_k in (0, pi/2).
QpReduction qp_to_ee_reduction(const Mat& form, const std::vector<Vec>& h,
                               const std::vector<double>& t);

}  // namespace ellipt
