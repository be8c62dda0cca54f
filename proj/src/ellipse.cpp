#include "ellipt/ellipse.hpp"

#include <cmath>
#include <random>

namespace ellipt {

namespace {

// b = lambda * a, componentwise exact.  Near-degenerate pairs stay as given;
// the solvers tolerate them.
std::optional<double> exact_multiple(const Vec& a, const Vec& b) {
    int pivot = -1;
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] != 0.0) { pivot = i; break; }
    }
    if (pivot < 0) return std::nullopt;
    const double lambda = b[pivot] / a[pivot];
    for (int i = 0; i < a.size(); ++i) {
        if (b[i] != lambda * a[i]) return std::nullopt;
    }
    return lambda;
}

}  // namespace

Ellipse::Ellipse(Vec a, Vec b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.size() != b_.size()) {
        throw std::invalid_argument("Ellipse: conjugate radii of different length");
    }
    if (a_.size() < 2) {
        throw std::invalid_argument("Ellipse: dimension must be at least 2");
    }
    if (b_.isZero(0.0)) return;
    if (a_.isZero(0.0)) {  // E(0,b) is the segment [-b, b]
        a_ = b_;
        b_.setZero();
        return;
    }
    if (auto lambda = exact_multiple(a_, b_)) {
        a_ *= std::sqrt(1.0 + *lambda * *lambda);
        b_.setZero();
    }
}

Ellipse Ellipse::segment(Vec a) {
    Vec zero = Vec::Zero(a.size());
    return Ellipse(std::move(a), std::move(zero));
}

Ellipse Ellipse::from_complex(const CVec& v) {
    return Ellipse(v.real(), v.imag());
}

CVec Ellipse::complex() const {
    CVec v(a_.size());
    v.real() = a_;
    v.imag() = b_;
    return v;
}

Vec Ellipse::point(double t) const {
    return a_ * std::cos(t) + b_ * std::sin(t);
}

double Ellipse::major_radius() const {
    // |a cos t + b sin t|^2 = (|a|^2+|b|^2)/2 + ((|a|^2-|b|^2) cos 2t + 2(a,b) sin 2t)/2
    const double sa = a_.squaredNorm(), sb = b_.squaredNorm(), ab = a_.dot(b_);
    const double mean = 0.5 * (sa + sb);
    const double amp = 0.5 * std::hypot(sa - sb, 2.0 * ab);
    return std::sqrt(mean + amp);
}

bool Ellipse::is_zero(double tol) const {
    return a_.norm() <= tol && b_.norm() <= tol;
}

double support(const Ellipse& e, const Vec& x) {
    if (x.size() != e.dim()) {
        throw std::invalid_argument("support: direction dimension mismatch");
    }
    return std::hypot(x.dot(e.a()), x.dot(e.b()));
}

double support_sq(const Ellipse& e, const Vec& x) {
    if (x.size() != e.dim()) {
        throw std::invalid_argument("support_sq: direction dimension mismatch");
    }
    const double da = x.dot(e.a()), db = x.dot(e.b());
    return da * da + db * db;
}

Ellipse elliptic_rotate(const Ellipse& e, double s) {
    // real and imaginary part of e^{-is} (a + ib); the identity at s = 0
    const double c = std::cos(s), sn = std::sin(s);
    return Ellipse(e.a() * c + e.b() * sn, e.b() * c - e.a() * sn);
}

std::vector<Vec> direction_grid(int d, int extra, unsigned seed) {
    std::vector<Vec> dirs;
    dirs.reserve(static_cast<size_t>(2 * d + extra));
    for (int i = 0; i < d; ++i) {
        Vec e = Vec::Zero(d);
        e[i] = 1.0;
        dirs.push_back(e);
        dirs.push_back(-e);
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 0; k < extra; ++k) {
        Vec x(d);
        do {
            for (int i = 0; i < d; ++i) x[i] = gauss(rng);
        } while (x.norm() < 1e-8);
        dirs.push_back(x / x.norm());
    }
    return dirs;
}

bool same_ellipse(const Ellipse& e1, const Ellipse& e2, double tol) {
    if (e1.dim() != e2.dim()) return false;
    const CVec v1 = e1.complex(), v2 = e2.complex();
    const double n1 = v1.norm(), n2 = v2.norm();
    if (n1 <= tol || n2 <= tol) return n1 <= tol && n2 <= tol;
    if (std::abs(n1 - n2) > tol * std::max(n1, n2)) return false;

    auto matches = [&](const CVec& base) {
        // Eigen's dot conjugates the left argument: base.dot(v2) projects v2
        // onto base, giving the candidate z with v2 = z * base.
        const std::complex<double> z = base.dot(v2) / base.squaredNorm();
        if (std::abs(std::abs(z) - 1.0) > tol) return false;
        return (v2 - z * base).norm() <= tol * n1;
    };
    if (!matches(v1) && !matches(v1.conjugate())) return false;

    for (const Vec& x : direction_grid(e1.dim(), 16)) {
        const double s1 = support(e1, x), s2 = support(e2, x);
        if (std::abs(s1 - s2) > tol * std::max(1.0, std::max(s1, s2))) return false;
    }
    return true;
}

EllipticPolytope::EllipticPolytope(std::vector<Ellipse> ellipses)
    : ellipses_(std::move(ellipses)) {
    if (ellipses_.empty()) {
        throw std::invalid_argument("EllipticPolytope: needs at least one ellipse");
    }
    const int d = ellipses_.front().dim();
    for (const Ellipse& e : ellipses_) {
        if (e.dim() != d) {
            throw std::invalid_argument("EllipticPolytope: mixed dimensions");
        }
    }
}

double EllipticPolytope::support(const Vec& x) const {
    double best = 0.0;
    for (const Ellipse& e : ellipses_) best = std::max(best, ellipt::support(e, x));
    return best;
}

double EllipticPolytope::support_sq(const Vec& x) const {
    double best = 0.0;
    for (const Ellipse& e : ellipses_) best = std::max(best, ellipt::support_sq(e, x));
    return best;
}

double separation_margin(const Ellipse& e0, const EllipticPolytope& p, const Vec& x) {
    if (e0.dim() != p.dim()) {
        throw std::invalid_argument("separation_margin: dimension mismatch");
    }
    return support_sq(e0, x) - p.support_sq(x);
}

ComplexVertexSet vertex_set(const EllipticPolytope& p) {
    ComplexVertexSet out;
    out.vertices.reserve(static_cast<size_t>(p.count()));
    for (const Ellipse& e : p.ellipses()) out.vertices.push_back(e.complex());
    return out;
}

ComplexVertexSet conjugate_closure(const ComplexVertexSet& v, double tol) {
    ComplexVertexSet out = v;
    for (const CVec& w : v.vertices) {
        const CVec wc = w.conjugate();
        bool present = false;
        for (const CVec& u : out.vertices) {
            if ((u - wc).norm() <= tol * std::max(1.0, wc.norm())) {
                present = true;
                break;
            }
        }
        if (!present) out.vertices.push_back(wc);
    }
    out.self_conjugate = true;
    return out;
}

}  // namespace ellipt
