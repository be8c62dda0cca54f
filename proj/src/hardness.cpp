#include "ellipt/hardness.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace ellipt {

namespace {

constexpr double kPi = std::numbers::pi;

double point_segment_dist(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                          const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double t = ab.squaredNorm() > 0.0 ? (p - a).dot(ab) / ab.squaredNorm() : 0.0;
    const double tc = std::clamp(t, 0.0, 1.0);
    return (p - (a + tc * ab)).norm();
}

double point_polygon_dist(const Eigen::Vector2d& p, const std::vector<Eigen::Vector2d>& poly) {
    bool inside = true;
    double dist = kInf;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d &a = poly[i], &b = poly[(i + 1) % n];
        const Eigen::Vector2d e = b - a;
        if (e.x() * (p.y() - a.y()) - e.y() * (p.x() - a.x()) < 0.0) inside = false;
        dist = std::min(dist, point_segment_dist(p, a, b));
    }
    return inside ? 0.0 : dist;
}

std::vector<Eigen::Vector2d> regular_polygon(int n) {
    std::vector<Eigen::Vector2d> out;
    const int count = 1 << n;
    for (int k = 0; k < count; ++k) {
        const double ang = 2.0 * kPi * k / count;
        out.push_back({std::cos(ang), std::sin(ang)});
    }
    return out;
}

}  // namespace

double polygon_hausdorff(const std::vector<Eigen::Vector2d>& a,
                         const std::vector<Eigen::Vector2d>& b) {
    double h = 0.0;
    for (const auto& p : a) h = std::max(h, point_polygon_dist(p, b));
    for (const auto& p : b) h = std::max(h, point_polygon_dist(p, a));
    return h;
}

int PerturbedLift::facet_count() const {
    int f = 0;
    for (const auto& row : system.rows) {
        if (!row.equality) ++f;
    }
    return f;
}

PerturbedLift build_lift_with_shears(int n, const std::vector<double>& shears) {
    PerturbedLift lift;
    lift.n = n;
    lift.shears = shears;
    lift.system = build_lifted_polygon(n, shears);
    lift.projected_vertices = lift.system.polygon_vertices(1.0);
    lift.hausdorff_to_regular = polygon_hausdorff(lift.projected_vertices, regular_polygon(n));

    std::vector<double> dist;
    for (const auto& v : lift.projected_vertices) dist.push_back(v.norm());
    std::sort(dist.begin(), dist.end());
    lift.min_distance_gap = dist.size() > 1 ? kInf : 0.0;
    for (size_t i = 1; i < dist.size(); ++i) {
        lift.min_distance_gap = std::min(lift.min_distance_gap, dist[i] - dist[i - 1]);
    }
    return lift;
}

PerturbedLift build_perturbed_lift(int n, double eps, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("build_perturbed_lift: n >= 2 required");
    if (!(eps > 0.0)) throw std::invalid_argument("build_perturbed_lift: eps must be positive");
    std::mt19937_64 rng(seed);
    const double spread = eps / (4.0 * n);
    std::uniform_real_distribution<double> unif(-spread, spread);

    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<double> shears(static_cast<size_t>(n));
        for (double& s : shears) s = unif(rng);
        PerturbedLift lift = build_lift_with_shears(n, shears);
        if (static_cast<int>(lift.projected_vertices.size()) != (1 << n)) continue;
        if (lift.hausdorff_to_regular > eps) continue;
        if (lift.min_distance_gap <= 1e-12) continue;
        return lift;
    }
    throw std::runtime_error("build_perturbed_lift: no distinct-distance configuration found");
}

LocalMaximaCount count_local_maxima(const PerturbedLift& lift) {
    LocalMaximaCount out;
    const auto& v = lift.projected_vertices;
    const size_t n = v.size();
    std::vector<double> values;
    for (size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d &prev = v[(i + n - 1) % n], &next = v[(i + 1) % n];
        // the squared norm decreases along both incident edges
        if ((v[i] - prev).dot(v[i]) > 0.0 && (v[i] - next).dot(v[i]) > 0.0) {
            ++out.count;
            values.push_back(v[i].squaredNorm());
        }
    }
    std::sort(values.begin(), values.end());
    for (double val : values) {
        if (out.distinct_values.empty() ||
            val - out.distinct_values.back() > 1e-12 * std::max(1.0, val)) {
            out.distinct_values.push_back(val);
        }
    }
    return out;
}

QpReduction qp_to_ee_reduction(const Mat& form, const std::vector<Vec>& h,
                               const std::vector<double>& t) {
    if (form.rows() != form.cols()) throw std::invalid_argument("qp_to_ee_reduction: square form expected");
    if (h.empty() || h.size() != t.size()) {
        throw std::invalid_argument("qp_to_ee_reduction: one angle per halfspace pair expected");
    }
    const int d = static_cast<int>(form.rows());

    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (form + form.transpose()));
    const Vec evals = es.eigenvalues();  // ascending
    const double scale = std::max(1.0, evals.cwiseAbs().maxCoeff());
    if (evals.minCoeff() < -1e-10 * scale) {
        throw std::invalid_argument("qp_to_ee_reduction: form is not positive semidefinite");
    }
    for (int i = 0; i < d - 2; ++i) {
        if (evals[i] > 1e-10 * scale) {
            throw std::invalid_argument("qp_to_ee_reduction: form rank exceeds 2");
        }
    }
    Vec a0 = std::sqrt(std::max(0.0, evals[d - 1])) * es.eigenvectors().col(d - 1);
    Vec b0 = d >= 2 ? Vec(std::sqrt(std::max(0.0, evals[d - 2])) * es.eigenvectors().col(d - 2))
                    : Vec(Vec::Zero(d));

    std::vector<Ellipse> ellipses;
    for (size_t k = 0; k < h.size(); ++k) {
        if (!(t[k] > 0.0 && t[k] < 0.5 * kPi)) {
            throw std::invalid_argument("qp_to_ee_reduction: angles must lie in (0, pi/2)");
        }
        if (h[k].size() != d) throw std::invalid_argument("qp_to_ee_reduction: halfspace dimension");
        ellipses.emplace_back(Vec(h[k] * std::cos(t[k])), Vec(h[k] * std::sin(t[k])));
    }
    return {Ellipse(std::move(a0), std::move(b0)), EllipticPolytope(std::move(ellipses))};
}

}  // namespace ellipt
