#include "ellipt/ee_engine.hpp"

#include <algorithm>
#include <cmath>

namespace ellipt {

const char* to_string(Method m) {
    switch (m) {
        case Method::Exact: return "exact";
        case Method::Cpm: return "cpm";
        case Method::Cutting: return "cutting";
        case Method::Projection: return "projection";
        case Method::Mixed: return "mixed";
    }
    return "unknown";
}

Method method_from_string(const std::string& s) {
    if (s == "exact") return Method::Exact;
    if (s == "cpm") return Method::Cpm;
    if (s == "cutting") return Method::Cutting;
    if (s == "projection") return Method::Projection;
    if (s == "mixed") return Method::Mixed;
    throw std::invalid_argument("unknown method '" + s + "'");
}

namespace {

EeVerdict exact_decide(const Ellipse& e0, const EllipticPolytope& p) {
    const int d = e0.dim();
    if (d > 3) {
        throw std::invalid_argument(
            "exact method supports d <= 3 only; use cpm, cutting, projection or mixed");
    }
    ExactDecision dec = (d == 2) ? decide_ee_2d_ex(e0, p) : decide_ee_3d_ex(e0, p);
    EeVerdict v;
    v.method = "exact";
    v.factor = 1.0;
    if (dec.inside) {
        v.outcome = EeOutcome::Inside;
    } else {
        v.outcome = EeOutcome::Outside;
        v.direction = dec.witness;
        if (v.direction) v.margin = separation_margin(e0, p, *v.direction);
    }
    return v;
}

}  // namespace

EeVerdict mixed_decide(const Ellipse& e0, const EllipticPolytope& p, double bound_lo,
                       double bound_hi, double factor) {
    EeVerdict v;
    if (e0.is_zero()) {
        v.outcome = EeOutcome::Inside;
        v.factor = 1.0;
        v.method = "mixed";
        return v;
    }
    const CpmResult res = cpm_value(e0, p, true);
    // the elliptic norm of E0 in P sits in [1/(2 t0), 1/t0]
    const double t0 = res.t0_max;
    if (t0 >= 1.0 || (bound_lo < 1.0 && t0 * bound_lo >= 1.0)) {
        v.outcome = EeOutcome::Inside;
        v.factor = 1.0;
        v.method = "cpm";
        return v;
    }
    if (2.0 * t0 * bound_hi < 1.0) {
        EeVerdict cv = cpm_decide_from(res, e0, p);
        if (cv.outside()) return cv;
        // borderline certificate failure; escalate
    }
    ProjOptions opts;
    opts.target_factor = factor;
    EeVerdict pv = proj_decide(e0, p, opts);
    pv.method = "mixed";
    return pv;
}

EeVerdict decide(const Ellipse& e0, const EllipticPolytope& p, const DecideOptions& opts) {
    if (e0.dim() != p.dim()) throw std::invalid_argument("decide: dimension mismatch");
    switch (opts.method) {
        case Method::Exact:
            return exact_decide(e0, p);
        case Method::Cpm:
            return cpm_decide(e0, p);
        case Method::Cutting: {
            CutOptions copts;
            copts.target_factor = opts.factor;
            copts.max_iter = opts.max_iter;
            return cut_decide(e0, p, copts);
        }
        case Method::Projection: {
            ProjOptions popts;
            popts.target_factor = opts.factor;
            popts.max_iter = opts.max_iter;
            return proj_decide(e0, p, popts);
        }
        case Method::Mixed:
            return mixed_decide(e0, p, opts.bound_lo, opts.bound_hi, opts.factor);
    }
    throw std::logic_error("decide: unreachable");
}

EeVerdict decide(const Ellipse& e0, const EllipticPolytope& p, Method method, double factor) {
    DecideOptions opts;
    opts.method = method;
    opts.factor = factor;
    return decide(e0, p, opts);
}

EllipticPolytope reduce(const EllipticPolytope& p, Method method, double factor) {
    const int N = p.count();
    std::vector<int> alive;
    for (int k = 0; k < N; ++k) {
        bool dup = false;
        for (int j : alive) {
            if (same_ellipse(p[k], p[j])) { dup = true; break; }
        }
        if (!dup && !p[k].is_zero(1e-14)) alive.push_back(k);
    }
    if (alive.empty()) alive.push_back(0);

    // test candidates in order of decreasing major radius
    std::vector<int> order = alive;
    std::stable_sort(order.begin(), order.end(), [&p](int i, int j) {
        return p[i].major_radius() > p[j].major_radius();
    });

    std::vector<char> removed(static_cast<size_t>(N), 0);
    for (int k : order) {
        std::vector<Ellipse> rest;
        for (int j : alive) {
            if (j != k && !removed[static_cast<size_t>(j)]) rest.push_back(p[j]);
        }
        if (rest.empty()) continue;
        EeVerdict v = decide(p[k], EllipticPolytope(std::move(rest)),
                             DecideOptions{method, factor, 1.0, 1.0, 400});
        if (v.inside()) removed[static_cast<size_t>(k)] = 1;
    }

    std::vector<Ellipse> out;
    for (int j : alive) {
        if (!removed[static_cast<size_t>(j)]) out.push_back(p[j]);
    }
    if (out.empty()) out.push_back(p[alive.front()]);
    return EllipticPolytope(std::move(out));
}

}  // namespace ellipt
