#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ellipt/types.hpp"

namespace ellipt {

/// Centred ellipse E(a,b) = { a cos t + b sin t }, given by a pair of
/// conjugate radii in R^d.  b = 0 gives the segment [-a, a]; a = b = 0
/// is the single point at the origin.  Pairs (a,b) with b an exact scalar
/// multiple of a are reduced to segment form at construction;
/// near-degenerate pairs are kept as given.
class Ellipse {
public:
    Ellipse(Vec a, Vec b);

    static Ellipse segment(Vec a);
    static Ellipse from_complex(const CVec& v);

    const Vec& a() const { return a_; }
    const Vec& b() const { return b_; }
    int dim() const { return static_cast<int>(a_.size()); }

    /// Complex view v = a + i b.
    CVec complex() const;

    /// Boundary point a cos t + b sin t.
    Vec point(double t) const;

    /// max_t |a cos t + b sin t|  (length of the major semi-axis).
    double major_radius() const;

    bool is_zero(double tol = 0.0) const;

private:
    Vec a_, b_;
};

/// sup_{w in E} (x, w) = sqrt((x,a)^2 + (x,b)^2).
double support(const Ellipse& e, const Vec& x);
double support_sq(const Ellipse& e, const Vec& x);

/// (a_s, b_s) = (a cos s + b sin s, a sin s - b cos s); same point set.
Ellipse elliptic_rotate(const Ellipse& e, double s);

/// Set equality: v2 = z v1 or z conj(v1) with |z| = 1, plus agreement of
/// the support functions on a fixed direction grid.
bool same_ellipse(const Ellipse& e1, const Ellipse& e2, double tol = 1e-9);

/// P = co{E_1, ..., E_N}; centrally symmetric by construction.
class EllipticPolytope {
public:
    explicit EllipticPolytope(std::vector<Ellipse> ellipses);

    const std::vector<Ellipse>& ellipses() const { return ellipses_; }
    const Ellipse& operator[](int k) const { return ellipses_[static_cast<size_t>(k)]; }
    int count() const { return static_cast<int>(ellipses_.size()); }
    int dim() const { return ellipses_.front().dim(); }

    /// Support function of the hull: max_k support(E_k, x).
    double support(const Vec& x) const;
    double support_sq(const Vec& x) const;

private:
    std::vector<Ellipse> ellipses_;
};

/// support_sq(e0, x) - max_k support_sq(E_k, x); positive for some x
/// iff E0 is not contained in P.
double separation_margin(const Ellipse& e0, const EllipticPolytope& p, const Vec& x);

/// Vertex list of a balanced complex polytope, v_k = a_k + i b_k.
struct ComplexVertexSet {
    std::vector<CVec> vertices;
    bool self_conjugate = false;
};

ComplexVertexSet vertex_set(const EllipticPolytope& p);

/// Appends missing conjugates; vertices that equal their own conjugate are
/// kept as a single copy.  The real part of the generated balanced polytope
/// is unchanged.
ComplexVertexSet conjugate_closure(const ComplexVertexSet& v, double tol = 1e-12);

/// Deterministic direction grid used by equality tests and test oracles:
/// +-coordinate axes plus seeded unit pseudo-random directions.
std::vector<Vec> direction_grid(int d, int extra = 64, unsigned seed = 0x5eed);

}  // namespace ellipt
