#pragma once

#include <complex>
#include <optional>

#include "ellipt/ee_engine.hpp"

namespace ellipt {

struct MatrixFamily {
    std::vector<Mat> matrices;

    int dim() const { return static_cast<int>(matrices.front().rows()); }
    int count() const { return static_cast<int>(matrices.size()); }
    void validate() const;
};

/// Candidate spectrum maximizing product: word over the family indices,
/// lambda = rho(Pi)^{1/|Pi|}, and the residual-verified leading eigenvector.
struct SmpCandidate {
    std::vector<int> word;
    double lambda = 0.0;
    std::complex<double> leading;
    CVec eigenvector;
    bool nonreal = false;
    bool simple = true;
    double residual = 0.0;
};

double spectral_radius(const Mat& A);

/// Exhaustive candidate search over words of length <= depth, deduplicated
/// by cyclic shifts and power repetition.
SmpCandidate find_smp_candidate(const MatrixFamily& fam, int depth);

struct NormTableEntry {
    int matrix_index = 0;
    int vertex_index = 0;
    double norm_upper = 0.0;  // certified bound of || (lambda^-1 A) E ||_P
};

struct InvariantPolytopeCert {
    std::optional<EllipticPolytope> polytope;
    double lambda = 0.0;
    std::vector<NormTableEntry> table;
    bool complete = false;
    int iterations = 0;
    std::string diagnostics;
};

/// Invariant elliptic polytope for a single matrix with nonreal simple
/// leading eigenvalue: P with A P inside rho(A)(1+tol) P, grown from the
/// seed ellipse E(v) of the leading eigenvector.
/// Throws std::invalid_argument when the leading eigenvalue is real.
InvariantPolytopeCert lyapunov_single(const Mat& A, double tol = 1e-6, int max_iter = 200);

struct JsrResult {
    double lambda = 0.0;
    SmpCandidate smp;
    InvariantPolytopeCert cert;
    double lower_bound = 0.0;
    double upper_bound = kInf;
    std::string diagnostics;
};

/// Called once per scaled image ellipse before the absorption test, with
/// the polytope it is tested against.
using IpaObserver = std::function<void(const Ellipse& image, const EllipticPolytope& current)>;

/// Invariant polytope algorithm with elliptic polytopes.  On success the
/// certificate proves rho(family) = lambda; otherwise the best bounds
/// collected during the iteration are reported.
JsrResult jsr_invariant_polytope(const MatrixFamily& fam, int smp_depth = 6,
                                 double tol = 1e-6, int max_iter = 50,
                                 const IpaObserver& observer = nullptr);

}  // namespace ellipt
