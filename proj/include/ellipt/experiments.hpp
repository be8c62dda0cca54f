#pragma once

#include <cstdint>
#include <string>

#include "ellipt/applications.hpp"

namespace ellipt {

/// Reproducible sampling request: identical spec gives an identical sample.
struct SampleSpec {
    enum class Dist { BallUniform, CubeUniform, Gaussian };
    enum class Obj { Points, Ellipses };

    Dist dist = Dist::Gaussian;
    int d = 3;
    int N = 12;
    std::uint64_t seed = 1;
    Obj obj = Obj::Ellipses;
};

const char* to_string(SampleSpec::Dist d);
const char* to_string(SampleSpec::Obj o);
SampleSpec::Dist dist_from_string(const std::string& s);

std::vector<Vec> sample_points(const SampleSpec& spec);
std::vector<Ellipse> sample_ellipses(const SampleSpec& spec);

struct DatasetInstance {
    std::string id;
    Ellipse e0;
    EllipticPolytope p;
};

/// Dataset A: query ellipse and elliptic polytope with Gaussian real and
/// imaginary parts, dimensions and vertex counts cycling over the ranges.
std::vector<DatasetInstance> gen_dataset_a(int count, int d_min, int d_max, int n_min,
                                           int n_max, std::uint64_t seed);

/// Dataset B: (image ellipse, polytope) pairs harvested while the invariant
/// polytope algorithm runs on random families with nonreal leading
/// eigenvalue of the candidate product.  Harvest failures are skipped.
std::vector<DatasetInstance> gen_dataset_b(int families, int d, std::uint64_t seed,
                                           int per_polytope = 100);

/// |reduce(P)|/N for ellipses; LP-membership cleaning fraction for points.
double vertex_fraction(const SampleSpec& spec, Method method = Method::Mixed,
                       double q = 0.995);

struct FactorHistogram {
    std::vector<int> bins;        // histogram over [0, 1]
    std::vector<double> factors;  // per-instance measured factor
    int excluded = 0;             // truth-oracle failures
    double median() const;
};

/// Measured approximation factor of the complex polytope method:
/// t0_max times the elliptic norm of E0 in P (projection-method truth at
/// factor 0.9999).  apply_closure = false is the negative control.
FactorHistogram factor_density(const std::vector<DatasetInstance>& data, int bins,
                               bool apply_closure = true);

/// Append-only CSV rows of experiment runs; reruns with the same seed are
/// identical except for the timing column.
struct RunRecord {
    std::string run_id;
    std::string dist;
    int d = 0;
    int N = 0;
    std::uint64_t seed = 0;
    std::string object;
    std::string method;
    double q = 0.0;
    double time_ms = 0.0;
    std::string verdict;
    double value = 0.0;
    int n_vertices = 0;

    static std::string csv_header();
    std::string csv_row() const;
};

}  // namespace ellipt
