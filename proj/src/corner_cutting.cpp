#include "ellipt/corner_cutting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ellipt {

namespace {
constexpr double kPi = std::numbers::pi;
}

Vec corner_point(const Ellipse& e0, const Arc& arc) {
    if (!(arc.len() > 0.0) || arc.len() >= kPi) {
        throw std::invalid_argument("corner_point: arc length must lie in (0, pi)");
    }
    const double sigma = arc.mid();
    return (e0.a() * std::cos(sigma) + e0.b() * std::sin(sigma)) / std::cos(0.5 * arc.len());
}

NormBracket pe_norm_socp(const Vec& w, const EllipticPolytope& p, double tol) {
    const int d = p.dim();
    if (w.size() != d) throw std::invalid_argument("pe_norm_socp: dimension mismatch");
    NormBracket out;
    if (w.norm() == 0.0) return out;  // norm 0

    const int N = p.count();
    Mat span(d, 2 * N);
    for (int j = 0; j < N; ++j) {
        span.col(2 * j) = p[j].a();
        span.col(2 * j + 1) = p[j].b();
    }
    const Vec resid = span * span.colPivHouseholderQr().solve(w) - w;
    if (resid.norm() > 1e-9 * std::max(1.0, w.norm())) {
        out.outside_span = true;
        out.lo = out.hi = kInf;
        return out;
    }

    ConeProgram cp;
    cp.c = Vec::Zero(3 * N);
    cp.A = Mat::Zero(d, 3 * N);
    cp.b = w;
    for (int j = 0; j < N; ++j) {
        cp.blocks.push_back({ConeProgram::Block::Kind::Soc, 3});
        cp.c[3 * j] = 1.0;
        cp.A.block(0, 3 * j + 1, d, 1) = p[j].a();
        cp.A.block(0, 3 * j + 2, d, 1) = p[j].b();
    }
    SolveReport rep = solve_socp(cp, tol);
    if (rep.status == SolveStatus::Infeasible) {
        out.outside_span = true;
        out.lo = out.hi = kInf;
        return out;
    }
    if (rep.status != SolveStatus::Optimal) {
        throw std::runtime_error("pe_norm_socp: solver did not converge (" + rep.message + ")");
    }
    const double r = std::max(0.0, rep.value);
    const double width = 0.5 * tol * std::max(1.0, r);
    out.lo = std::max(0.0, r - width);
    out.hi = r + width;
    out.dual = rep.y_eq;
    if (out.dual.size() == d && out.dual.dot(w) < 0.0) out.dual *= -1.0;
    return out;
}

namespace {

struct ArcEntry {
    Arc arc;
    NormBracket norm;
    double parent_lo = 0.0;   // lower norm bound of the parent corner
    double parent_mid = 0.0;  // parameter of the tangency point shared with the sibling
    bool has_parent = false;
};

// separating direction for a certified outside tangency point
std::optional<Vec> verified_direction(const Ellipse& e0, const EllipticPolytope& p,
                                      const Vec& dual) {
    if (dual.size() != e0.dim() || dual.norm() < 1e-300) return std::nullopt;
    const Vec x = dual / dual.norm();
    if (separation_margin(e0, p, x) > 0.0) return x;
    return std::nullopt;
}

// components of a0, b0 orthogonal to span(P): separating directions whenever
// E0 leaves the span
std::vector<Vec> span_residual_directions(const Ellipse& e0, const EllipticPolytope& p) {
    const int d = p.dim();
    Mat span(d, 2 * p.count());
    for (int j = 0; j < p.count(); ++j) {
        span.col(2 * j) = p[j].a();
        span.col(2 * j + 1) = p[j].b();
    }
    const auto qr = span.colPivHouseholderQr();
    std::vector<Vec> out;
    for (const Vec* v : {&e0.a(), &e0.b()}) {
        const Vec r = *v - span * qr.solve(*v);
        if (r.norm() > 1e-10 * std::max(1.0, v->norm())) out.push_back(r / r.norm());
    }
    return out;
}

}  // namespace

EeVerdict cut_decide(const Ellipse& e0, const EllipticPolytope& p, const CutOptions& opts,
                     const NormOracle& oracle, CutStats* stats) {
    if (e0.dim() != p.dim()) throw std::invalid_argument("cut_decide: dimension mismatch");
    if (!(opts.target_factor > 0.0 && opts.target_factor < 1.0)) {
        throw std::invalid_argument("cut_decide: target factor must lie in (0,1)");
    }
    EeVerdict v;
    v.method = "cutting";
    if (e0.is_zero()) {
        v.outcome = EeOutcome::Inside;
        v.factor = 1.0;
        return v;
    }

    auto eval = [&](const Arc& a) {
        NormBracket nb = oracle(corner_point(e0, a));
        if (nb.outside_span) {
            // some corner of the circumscribed polygon leaves span(P); the
            // tangency points of its arc leave it as well for a generic mid
            nb.lo = nb.hi = kInf;
        }
        return nb;
    };

    std::vector<ArcEntry> arcs(2);
    arcs[0].arc = {0.0, 0.5 * kPi, 1};
    arcs[1].arc = {0.5 * kPi, kPi, 1};
    arcs[0].norm = eval(arcs[0].arc);
    arcs[1].norm = eval(arcs[1].arc);
    if (stats) stats->level_iteration.push_back({1, 0});

    int deepest = 1;
    for (int iter = 0;; ++iter) {
        if (stats) stats->iterations = iter;

        double nu_hi = 0.0;
        double tau_min = kPi;
        for (const ArcEntry& ae : arcs) {
            nu_hi = std::max(nu_hi, ae.norm.hi);
            tau_min = std::min(tau_min, ae.arc.len());
        }
        if (stats) stats->nu_history.push_back(nu_hi);

        // Inside: every polygon vertex has norm <= 1
        if (nu_hi <= 1.0 + opts.boundary_tol) {
            v.outcome = EeOutcome::Inside;
            v.factor = 1.0;
            for (const ArcEntry& ae : arcs) v.corner_norms.emplace_back(ae.arc.mid(), ae.norm.hi);
            return v;
        }

        // Outside: a tangency point w(2 tau) cos(tau) on E0 has norm > 1
        for (const ArcEntry& ae : arcs) {
            if (!ae.has_parent) continue;
            if (ae.parent_lo * std::cos(ae.arc.len()) > 1.0 + 1e-12) {
                const Vec pt = e0.point(ae.parent_mid);
                NormBracket nb = oracle(pt);
                if (nb.outside_span || nb.lo > 1.0) {
                    std::optional<Vec> dir;
                    if (!nb.outside_span) dir = verified_direction(e0, p, nb.dual);
                    if (!dir) {
                        std::vector<Vec> candidates = span_residual_directions(e0, p);
                        for (const Vec& x : direction_grid(e0.dim(), 64)) candidates.push_back(x);
                        for (const Vec& x : candidates) {
                            if (separation_margin(e0, p, x) > 0.0) { dir = x / x.norm(); break; }
                        }
                    }
                    if (dir) {
                        v.outcome = EeOutcome::Outside;
                        v.factor = opts.target_factor;
                        v.direction = dir;
                        v.margin = separation_margin(e0, p, *dir);
                        return v;
                    }
                }
            }
        }

        const double achieved = std::min(std::cos(tau_min) * opts.oracle_factor,
                                         nu_hi > 0.0 ? 1.0 / nu_hi : 1.0);
        if (std::cos(tau_min) * opts.oracle_factor >= opts.target_factor || iter >= opts.max_iter) {
            v.outcome = EeOutcome::QInside;
            v.factor = std::min(achieved, 1.0);
            for (const ArcEntry& ae : arcs) v.corner_norms.emplace_back(ae.arc.mid(), ae.norm.hi);
            return v;
        }

        // split the arc of largest corner norm; ties break on lowest start angle
        size_t best = 0;
        for (size_t i = 1; i < arcs.size(); ++i) {
            if (arcs[i].norm.hi > arcs[best].norm.hi + 1e-15 ||
                (std::abs(arcs[i].norm.hi - arcs[best].norm.hi) <= 1e-15 &&
                 arcs[i].arc.start < arcs[best].arc.start)) {
                best = i;
            }
        }
        ArcEntry mother = arcs[best];
        const double mid = mother.arc.mid();
        ArcEntry left, right;
        left.arc = {mother.arc.start, mid, mother.arc.level + 1};
        right.arc = {mid, mother.arc.end, mother.arc.level + 1};
        left.parent_lo = right.parent_lo = mother.norm.lo;
        left.parent_mid = right.parent_mid = mid;
        left.has_parent = right.has_parent = true;
        left.norm = eval(left.arc);
        right.norm = eval(right.arc);
        arcs[best] = left;
        arcs.push_back(right);
        if (left.arc.level > deepest) {
            deepest = left.arc.level;
            if (stats) stats->level_iteration.push_back({deepest, iter + 1});
        }
    }
}

EeVerdict cut_decide(const Ellipse& e0, const EllipticPolytope& p, const CutOptions& opts,
                     CutStats* stats) {
    NormOracle oracle = [&p](const Vec& w) { return pe_norm_socp(w, p); };
    return cut_decide(e0, p, opts, oracle, stats);
}

EllipseNormBracket ellipse_norm_bracket(const Ellipse& e0, const EllipticPolytope& p,
                                        double rel_target, int max_iter,
                                        const NormOracle& oracle) {
    if (e0.dim() != p.dim()) throw std::invalid_argument("ellipse_norm_bracket: dimension mismatch");
    EllipseNormBracket out;
    if (e0.is_zero()) return out;

    struct Entry {
        Arc arc;
        NormBracket norm;
    };
    auto eval = [&](const Arc& a) { return oracle(corner_point(e0, a)); };

    std::vector<Entry> arcs(2);
    arcs[0].arc = {0.0, 0.5 * kPi, 1};
    arcs[1].arc = {0.5 * kPi, kPi, 1};
    arcs[0].norm = eval(arcs[0].arc);
    arcs[1].norm = eval(arcs[1].arc);

    double best_lo = 0.0;
    for (int iter = 0;; ++iter) {
        double hi = 0.0;
        size_t best = 0;
        for (size_t i = 0; i < arcs.size(); ++i) {
            if (arcs[i].norm.outside_span) {
                out.outside_span = true;
                out.lo = out.hi = kInf;
                return out;
            }
            hi = std::max(hi, arcs[i].norm.hi);
            // tangency point at the arc midpoint: norm >= cos(len/2) * corner norm
            best_lo = std::max(best_lo, std::cos(0.5 * arcs[i].arc.len()) * arcs[i].norm.lo);
            if (arcs[i].norm.hi > arcs[best].norm.hi) best = i;
        }
        out.lo = best_lo;
        out.hi = hi;
        if (hi <= 0.0 || best_lo / hi >= rel_target || iter >= max_iter) return out;

        Entry mother = arcs[best];
        const double mid = mother.arc.mid();
        Entry left{{mother.arc.start, mid, mother.arc.level + 1}, {}};
        Entry right{{mid, mother.arc.end, mother.arc.level + 1}, {}};
        left.norm = eval(left.arc);
        right.norm = eval(right.arc);
        arcs[best] = left;
        arcs.push_back(right);
    }
}

EllipseNormBracket ellipse_norm_bracket(const Ellipse& e0, const EllipticPolytope& p,
                                        double rel_target, int max_iter) {
    NormOracle oracle = [&p](const Vec& w) { return pe_norm_socp(w, p); };
    return ellipse_norm_bracket(e0, p, rel_target, max_iter, oracle);
}

}  // namespace ellipt
