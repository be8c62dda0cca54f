#pragma once

#include "ellipt/complex_polytope.hpp"
#include "ellipt/corner_cutting.hpp"
#include "ellipt/exact_lowdim.hpp"
#include "ellipt/projection.hpp"

namespace ellipt {

enum class Method { Exact, Cpm, Cutting, Projection, Mixed };

const char* to_string(Method m);
Method method_from_string(const std::string& s);

struct DecideOptions {
    Method method = Method::Mixed;
    double factor = 0.995;     // target factor for the approximate methods
    double bound_lo = 1.0;     // range of interest of the mixed method
    double bound_hi = 1.0;
    int max_iter = 400;
};

/// Unified Problem EE front end.  Exact requires d <= 3; the mixed method
/// runs the complex polytope method first and escalates to the projection
/// method only when the cpm bracket straddles the range of interest.
EeVerdict decide(const Ellipse& e0, const EllipticPolytope& p,
                 const DecideOptions& opts = DecideOptions{});
EeVerdict decide(const Ellipse& e0, const EllipticPolytope& p, Method method,
                 double factor = 0.995);

EeVerdict mixed_decide(const Ellipse& e0, const EllipticPolytope& p, double bound_lo,
                       double bound_hi, double factor);

/// Removes the ellipses contained in the hull of the others.  Candidates are
/// processed in order of decreasing major radius; set-equal duplicates keep
/// the earliest index; QInside survivors are retained.
EllipticPolytope reduce(const EllipticPolytope& p, Method method = Method::Mixed,
                        double factor = 0.995);

}  // namespace ellipt
