#include "ellipt/applications.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>

namespace ellipt {

void MatrixFamily::validate() const {
    if (matrices.empty()) throw std::invalid_argument("MatrixFamily: empty");
    const auto d = matrices.front().rows();
    for (const Mat& A : matrices) {
        if (A.rows() != d || A.cols() != d) {
            throw std::invalid_argument("MatrixFamily: matrices must be square, common size");
        }
        if (!A.allFinite()) throw std::invalid_argument("MatrixFamily: non-finite entries");
    }
}

double spectral_radius(const Mat& A) {
    return Eigen::EigenSolver<Mat>(A, false).eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

bool canonical_under_rotation(const std::vector<int>& w) {
    const size_t L = w.size();
    // reject words that are powers of a shorter period
    for (size_t per = 1; per < L; ++per) {
        if (L % per != 0) continue;
        bool repeats = true;
        for (size_t i = per; i < L && repeats; ++i) repeats = (w[i] == w[i % per]);
        if (repeats) return false;
    }
    for (size_t s = 1; s < L; ++s) {
        for (size_t i = 0; i < L; ++i) {
            const int a = w[i], b = w[(i + s) % L];
            if (b < a) return false;  // a rotation is smaller
            if (b > a) break;
        }
    }
    return true;
}

bool is_mirror_pair(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::vector<int> rev(b.rbegin(), b.rend());
    const size_t L = a.size();
    for (size_t s = 0; s < L; ++s) {
        bool eq = true;
        for (size_t i = 0; i < L && eq; ++i) eq = (a[i] == rev[(i + s) % L]);
        if (eq) return true;
    }
    return false;
}

struct EigenPair {
    std::complex<double> value;
    CVec vector;
    bool simple = true;
};

// leading eigenpair; `simple` is false when eigenvalues other than the
// leading one (and its conjugate) share the maximal modulus, or when the
// leading one repeats
EigenPair leading_eigenpair(const Mat& A) {
    Eigen::EigenSolver<Mat> es(A, true);
    const auto& vals = es.eigenvalues();
    int lead = 0;
    for (int i = 1; i < vals.size(); ++i) {
        if (std::abs(vals[i]) > std::abs(vals[lead])) lead = i;
    }
    EigenPair out;
    out.value = vals[lead];
    out.vector = es.eigenvectors().col(lead);
    const double rho = std::abs(vals[lead]);
    int at_top = 0;
    for (int i = 0; i < vals.size(); ++i) {
        if (std::abs(vals[i]) >= rho * (1.0 - 1e-9)) ++at_top;
    }
    const bool nonreal = std::abs(out.value.imag()) > 1e-12 * std::max(1.0, rho);
    out.simple = nonreal ? (at_top == 2) : (at_top == 1);
    return out;
}

Mat word_product(const MatrixFamily& fam, const std::vector<int>& w) {
    Mat P = fam.matrices[static_cast<size_t>(w.front())];
    for (size_t i = 1; i < w.size(); ++i) P = fam.matrices[static_cast<size_t>(w[i])] * P;
    return P;
}

}  // namespace

SmpCandidate find_smp_candidate(const MatrixFamily& fam, int depth) {
    fam.validate();
    if (depth < 1) throw std::invalid_argument("find_smp_candidate: depth must be >= 1");
    const int m = fam.count();

    SmpCandidate best;
    std::vector<std::pair<std::vector<int>, double>> near_ties;

    std::vector<int> w;
    auto consider = [&](const std::vector<int>& word) {
        const Mat P = word_product(fam, word);
        const double lambda = std::pow(spectral_radius(P), 1.0 / static_cast<double>(word.size()));
        if (lambda > best.lambda * (1.0 + 1e-10) ||
            (lambda > best.lambda * (1.0 - 1e-10) && !best.word.empty() &&
             word.size() < best.word.size())) {
            if (!best.word.empty() && std::abs(lambda - best.lambda) <= 1e-10 * std::max(1.0, best.lambda)) {
                near_ties.push_back({best.word, best.lambda});
            } else {
                near_ties.clear();
            }
            best.word = word;
            best.lambda = lambda;
        } else if (!best.word.empty() &&
                   std::abs(lambda - best.lambda) <= 1e-10 * std::max(1.0, best.lambda)) {
            near_ties.push_back({word, lambda});
        }
    };
    std::function<void(int)> rec = [&](int len) {
        if (static_cast<int>(w.size()) == len) {
            if (canonical_under_rotation(w)) consider(w);
            return;
        }
        for (int a = 0; a < m; ++a) {
            w.push_back(a);
            rec(len);
            w.pop_back();
        }
    };
    for (int len = 1; len <= depth; ++len) rec(len);

    if (best.lambda <= 0.0) {
        best.simple = false;
        return best;
    }

    // a tie with a genuinely different word (not a mirror) breaks the
    // uniqueness assumption
    for (const auto& [word, lambda] : near_ties) {
        (void)lambda;
        if (word.size() == best.word.size() && word != best.word &&
            !is_mirror_pair(word, best.word)) {
            best.simple = false;
        }
    }

    const Mat P = word_product(fam, best.word);
    EigenPair ep = leading_eigenpair(P);
    best.leading = ep.value;
    best.eigenvector = ep.vector;
    best.simple = best.simple && ep.simple;
    best.nonreal = std::abs(ep.value.imag()) > 1e-12 * std::max(1.0, std::abs(ep.value));
    best.residual = (P * ep.vector - ep.value * ep.vector).norm() /
                    std::max(1e-300, P.norm() * ep.vector.norm());
    return best;
}

namespace {

constexpr double kLambdaInflation = 1e-10;
constexpr double kCertTol = 5e-7;

// certified norm upper bound when the image is absorbed by P
std::optional<double> try_absorb(const Ellipse& img, const EllipticPolytope& p) {
    if (img.is_zero(1e-14)) return 0.0;
    for (const Ellipse& v : p.ellipses()) {
        if (same_ellipse(img, v)) return 1.0;
    }
    const CpmResult res = cpm_value(img, p, true);
    if (res.t0_max * (1.0 + kCertTol) >= 1.0) {
        return std::min(1.0 + kCertTol, 1.0 / res.t0_max);
    }
    if (2.0 * res.t0_max < 0.9) return std::nullopt;  // clearly outside
    CutOptions copts;
    copts.target_factor = 0.995;
    copts.boundary_tol = kCertTol;
    copts.max_iter = 120;
    EeVerdict v = cut_decide(img, p, copts);
    if (v.inside()) {
        double hi = 0.0;
        for (const auto& [ang, nrm] : v.corner_norms) {
            (void)ang;
            hi = std::max(hi, nrm);
        }
        return std::min(1.0 + kCertTol, std::max(1.0, hi));
    }
    return std::nullopt;
}

struct IpaOutcome {
    InvariantPolytopeCert cert;
    double upper_bound = kInf;
};

IpaOutcome run_ipa(const MatrixFamily& fam, double lambda, const std::vector<Ellipse>& seed,
                   double tol, int max_iter, const IpaObserver& observer = nullptr) {
    IpaOutcome out;
    out.cert.lambda = lambda;
    const double lambda_hat = lambda * (1.0 + kLambdaInflation);
    std::vector<Mat> scaled;
    for (const Mat& A : fam.matrices) scaled.push_back(A / lambda_hat);

    std::vector<Ellipse> vertices = seed;
    std::vector<Ellipse> frontier = seed;
    bool complete = false;

    for (int iter = 0; iter < max_iter; ++iter) {
        out.cert.iterations = iter + 1;
        EllipticPolytope P(vertices);
        std::vector<Ellipse> fresh;
        double worst_new = 1.0;
        for (const Ellipse& e : frontier) {
            for (const Mat& A : scaled) {
                Ellipse img(A * e.a(), A * e.b());
                if (observer) observer(img, P);
                if (try_absorb(img, P)) continue;
                bool dup = false;
                for (const Ellipse& f : fresh) {
                    if (same_ellipse(img, f)) { dup = true; break; }
                }
                if (!dup) {
                    EllipseNormBracket nb = ellipse_norm_bracket(img, P, 0.9, 60);
                    worst_new = std::max(worst_new, nb.outside_span ? kInf : nb.hi);
                    fresh.push_back(img);
                }
            }
        }
        if (fresh.empty()) {
            complete = true;
            break;
        }
        out.upper_bound = std::min(out.upper_bound, lambda_hat * worst_new);

        std::vector<Ellipse> merged = vertices;
        merged.insert(merged.end(), fresh.begin(), fresh.end());
        EllipticPolytope cleaned = reduce(EllipticPolytope(std::move(merged)), Method::Mixed, 0.995);

        frontier.clear();
        for (const Ellipse& e : cleaned.ellipses()) {
            bool had = false;
            for (const Ellipse& v : vertices) {
                if (same_ellipse(e, v)) { had = true; break; }
            }
            if (!had) frontier.push_back(e);
        }
        vertices = cleaned.ellipses();
        if (frontier.empty()) {
            complete = true;
            break;
        }
    }

    EllipticPolytope P(vertices);
    out.cert.polytope = P;

    // final certificate pass over every (matrix, vertex) pair
    bool all_ok = complete;
    for (int vi = 0; vi < P.count(); ++vi) {
        for (int ai = 0; ai < fam.count(); ++ai) {
            Ellipse img(scaled[static_cast<size_t>(ai)] * P[vi].a(),
                        scaled[static_cast<size_t>(ai)] * P[vi].b());
            NormTableEntry entry{ai, vi, kInf};
            if (auto nb = try_absorb(img, P)) {
                entry.norm_upper = *nb;
            } else {
                EllipseNormBracket b = ellipse_norm_bracket(img, P, 0.999, 200);
                entry.norm_upper = b.outside_span ? kInf : b.hi;
            }
            if (!(entry.norm_upper <= 1.0 + std::max(tol, kCertTol))) all_ok = false;
            out.cert.table.push_back(entry);
        }
    }
    out.cert.complete = all_ok;
    if (!complete) out.cert.diagnostics = "iteration limit reached before closure";
    return out;
}

}  // namespace

InvariantPolytopeCert lyapunov_single(const Mat& A, double tol, int max_iter) {
    if (A.rows() != A.cols() || A.rows() < 2 || !A.allFinite()) {
        throw std::invalid_argument("lyapunov_single: square matrix of size >= 2 expected");
    }
    EigenPair ep = leading_eigenpair(A);
    const double rho = std::abs(ep.value);
    if (rho <= 0.0) throw std::invalid_argument("lyapunov_single: nilpotent matrix");
    if (std::abs(ep.value.imag()) <= 1e-9 * rho) {
        throw std::invalid_argument(
            "lyapunov_single: leading eigenvalue is real; the ordinary polytope "
            "construction applies, not the elliptic one");
    }
    if (!ep.simple) {
        throw std::invalid_argument("lyapunov_single: leading eigenvalue is not simple");
    }
    CVec v = ep.vector / ep.vector.norm();
    MatrixFamily fam;
    fam.matrices = {A};
    IpaOutcome out = run_ipa(fam, rho, {Ellipse::from_complex(v)}, tol, max_iter);
    return out.cert;
}

JsrResult jsr_invariant_polytope(const MatrixFamily& fam, int smp_depth, double tol,
                                 int max_iter, const IpaObserver& observer) {
    fam.validate();
    JsrResult res;
    res.smp = find_smp_candidate(fam, smp_depth);
    res.lambda = res.smp.lambda;
    res.lower_bound = res.smp.lambda;
    if (res.smp.lambda <= 0.0) {
        res.diagnostics = "no candidate with positive normalized spectral radius";
        return res;
    }
    if (!res.smp.simple) {
        res.diagnostics =
            "uniqueness/simplicity assumption violated for the candidate; attempting anyway";
    }

    CVec v = res.smp.eigenvector / res.smp.eigenvector.norm();
    Ellipse seed = res.smp.nonreal ? Ellipse::from_complex(v)
                                   : Ellipse::segment(v.real().norm() > 1e-12
                                                          ? Vec(v.real() / v.real().norm())
                                                          : Vec(v.imag() / v.imag().norm()));
    IpaOutcome out = run_ipa(fam, res.smp.lambda, {seed}, tol, max_iter, observer);
    res.cert = out.cert;
    if (res.cert.complete) {
        res.upper_bound = res.smp.lambda * (1.0 + kLambdaInflation) * (1.0 + kCertTol);
    } else {
        res.upper_bound = out.upper_bound;
        if (res.diagnostics.empty()) res.diagnostics = res.cert.diagnostics;
    }
    return res;
}

}  // namespace ellipt
