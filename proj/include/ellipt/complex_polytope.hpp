#pragma once

#include <complex>

#include "ellipt/coneprog.hpp"
#include "ellipt/ee_verdict.hpp"

namespace ellipt {

/// Result of the conic program behind Problem EE*: the largest t0 with
/// t0 v0 in cob{v_1..v_N, conj(v_1)..conj(v_N)}.
struct CpmResult {
    double t0_max = 0.0;
    std::vector<std::complex<double>> coeffs;  // z_k, one per vertex used
    bool closure_applied = true;
    SolveReport report;
    Vec dual_x, dual_y;  // separating functional c = x + i y, normalized
};

/// Solves the EE* program by one SOCP with 2N (or N when closure is
/// disabled) Lorentz cones of size 3.  Disabling the conjugate closure is
/// only meaningful as the negative control: the method's factor drops to
/// zero without it.
CpmResult cpm_value(const Ellipse& e0, const EllipticPolytope& p,
                    bool apply_closure = true, double tol = 1e-6);

/// Factor-1/2 decision: t0 >= 1 -> Inside; t0 < 1/2 -> Outside;
/// otherwise QInside(t0) (t0 E0 in P certified).
EeVerdict cpm_decide(const Ellipse& e0, const EllipticPolytope& p, double tol = 1e-6);

/// Same decision from an already computed closure result.
EeVerdict cpm_decide_from(const CpmResult& res, const Ellipse& e0, const EllipticPolytope& p);

}  // namespace ellipt
