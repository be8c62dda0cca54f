#include "ellipt/exact_lowdim.hpp"

#include "ellipt/solve_report.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>

namespace ellipt {

SlopeSet slope_solutions(double A, double B, double C) {
    SlopeSet out;
    const double disc = B * B - A * C;
    if (A < 0.0) {
        if (disc > 0.0) {
            const double sq = std::sqrt(disc);
            double r1 = (-B + sq) / A, r2 = (-B - sq) / A;  // r1 < r2 since A < 0
            out.intervals.emplace_back(r1, r2);
        }
        return out;  // empty when no real roots
    }
    if (A > 0.0) {
        out.include_inf = true;
        if (disc > 0.0) {
            const double sq = std::sqrt(disc);
            double r1 = (-B - sq) / A, r2 = (-B + sq) / A;
            out.intervals.emplace_back(-kInf, r1);
            out.intervals.emplace_back(r2, kInf);
        } else if (disc == 0.0) {
            const double r = -B / A;
            out.intervals.emplace_back(-kInf, r);
            out.intervals.emplace_back(r, kInf);
        } else {
            out.intervals.emplace_back(-kInf, kInf);
        }
        return out;
    }
    // A == 0: 2 B t + C > 0
    if (B > 0.0) {
        out.intervals.emplace_back(-C / (2.0 * B), kInf);
    } else if (B < 0.0) {
        out.intervals.emplace_back(-kInf, -C / (2.0 * B));
    } else if (C > 0.0) {
        out.intervals.emplace_back(-kInf, kInf);
    }
    return out;
}

SlopeSet intersect(const SlopeSet& s1, const SlopeSet& s2) {
    SlopeSet out;
    out.include_inf = s1.include_inf && s2.include_inf;
    size_t i = 0, j = 0;
    while (i < s1.intervals.size() && j < s2.intervals.size()) {
        const auto& [a1, b1] = s1.intervals[i];
        const auto& [a2, b2] = s2.intervals[j];
        const double lo = std::max(a1, a2), hi = std::min(b1, b2);
        if (lo < hi) out.intervals.emplace_back(lo, hi);
        if (b1 < b2) ++i; else ++j;
    }
    return out;
}

namespace {

// coefficients of (x,a0)^2+(x,b0)^2 - (x,ak)^2-(x,bk)^2 > 0 in slope form
// A y^2 + 2 B xy + C x^2 > 0
struct SlopeCoeffs { double A, B, C; };

SlopeCoeffs slope_coeffs(const Ellipse& e0, const Ellipse& ek) {
    const Vec &a0 = e0.a(), &b0 = e0.b(), &ak = ek.a(), &bk = ek.b();
    SlopeCoeffs sc;
    sc.C = a0[0] * a0[0] + b0[0] * b0[0] - ak[0] * ak[0] - bk[0] * bk[0];
    sc.A = a0[1] * a0[1] + b0[1] * b0[1] - ak[1] * ak[1] - bk[1] * bk[1];
    sc.B = a0[0] * a0[1] + b0[0] * b0[1] - ak[0] * ak[1] - bk[0] * bk[1];
    return sc;
}

Vec slope_witness(const SlopeSet& set) {
    if (!set.intervals.empty()) {
        const auto& [lo, hi] = set.intervals.front();
        double t;
        if (lo == -kInf && hi == kInf) t = 0.0;
        else if (lo == -kInf) t = hi - 1.0;
        else if (hi == kInf) t = lo + 1.0;
        else t = 0.5 * (lo + hi);
        Vec x(2);
        x << 1.0, t;
        return x / x.norm();
    }
    Vec x(2);
    x << 0.0, 1.0;
    return x;
}

}  // namespace

ExactDecision decide_ee_2d_ex(const Ellipse& e0, const EllipticPolytope& p) {
    if (e0.dim() != 2 || p.dim() != 2) {
        throw std::invalid_argument("decide_ee_2d: dimension must be 2");
    }
    SlopeSet sol;
    sol.include_inf = true;
    sol.intervals.emplace_back(-kInf, kInf);
    for (const Ellipse& ek : p.ellipses()) {
        const SlopeCoeffs sc = slope_coeffs(e0, ek);
        sol = intersect(sol, slope_solutions(sc.A, sc.B, sc.C));
        if (sol.empty()) return {true, std::nullopt};
    }
    return {false, slope_witness(sol)};
}

bool decide_ee_2d(const Ellipse& e0, const EllipticPolytope& p) {
    return decide_ee_2d_ex(e0, p).inside;
}

// ---------------------------------------------------------------------------
// d = 3
// ---------------------------------------------------------------------------

namespace {

// q(x,y) = qxx x^2 + qyy y^2 + 2 qxy xy + 2 qx x + 2 qy y + q0
struct Quad {
    double qxx = 0, qyy = 0, qxy = 0, qx = 0, qy = 0, q0 = 0;

    double eval(double x, double y) const {
        return qxx * x * x + qyy * y * y + 2.0 * qxy * x * y + 2.0 * qx * x + 2.0 * qy * y + q0;
    }
    double dx(double x, double y) const { return 2.0 * (qxx * x + qxy * y + qx); }
    double dy(double x, double y) const { return 2.0 * (qyy * y + qxy * x + qy); }
    double scale() const {
        return std::max({std::abs(qxx), std::abs(qyy), std::abs(qxy),
                         std::abs(qx), std::abs(qy), std::abs(q0)});
    }
};

void accumulate_sq(Quad& q, double alpha, double beta, double gamma, double sign) {
    q.qxx += sign * alpha * alpha;
    q.qyy += sign * beta * beta;
    q.qxy += sign * alpha * beta;
    q.qx += sign * alpha * gamma;
    q.qy += sign * beta * gamma;
    q.q0 += sign * gamma * gamma;
}

// f_k in the chart where coordinate `axis` is fixed to 1
Quad chart_quad(const Ellipse& e0, const Ellipse& ek, int axis) {
    const int i = (axis == 0) ? 1 : 0;
    const int j = (axis == 2) ? 1 : 2;
    Quad q;
    for (const Vec* v : {&ek.a(), &ek.b()}) accumulate_sq(q, (*v)[i], (*v)[j], (*v)[axis], +1.0);
    for (const Vec* v : {&e0.a(), &e0.b()}) accumulate_sq(q, (*v)[i], (*v)[j], (*v)[axis], -1.0);
    return q;
}

using Poly = std::vector<double>;  // coefficients, ascending degree

Poly poly_mul(const Poly& p, const Poly& q) {
    if (p.empty() || q.empty()) return {};
    Poly r(p.size() + q.size() - 1, 0.0);
    for (size_t i = 0; i < p.size(); ++i) {
        for (size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    }
    return r;
}

Poly poly_add(Poly p, const Poly& q) {
    if (q.size() > p.size()) p.resize(q.size(), 0.0);
    for (size_t i = 0; i < q.size(); ++i) p[i] += q[i];
    return p;
}

Poly poly_det(std::vector<std::vector<Poly>> m) {
    const size_t k = m.size();
    if (k == 1) return m[0][0];
    Poly det;
    for (size_t r = 0; r < k; ++r) {
        std::vector<std::vector<Poly>> minor;
        minor.reserve(k - 1);
        for (size_t rr = 0; rr < k; ++rr) {
            if (rr == r) continue;
            std::vector<Poly> row(m[rr].begin() + 1, m[rr].end());
            minor.push_back(std::move(row));
        }
        Poly term = poly_mul(m[r][0], poly_det(std::move(minor)));
        if (r % 2 == 1) {
            for (double& c : term) c = -c;
        }
        det = poly_add(std::move(det), term);
    }
    return det;
}

std::vector<double> real_roots(Poly p, double scale_hint) {
    // trim tiny leading coefficients
    const double lead_tol = 1e-12 * std::max(scale_hint, 1e-30);
    while (p.size() > 1 && std::abs(p.back()) <= lead_tol) p.pop_back();
    std::vector<double> roots;
    if (p.size() <= 1) return roots;  // constant (or identically ~0: handled by caller)
    const int deg = static_cast<int>(p.size()) - 1;
    if (deg == 1) {
        roots.push_back(-p[0] / p[1]);
        return roots;
    }
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -p[static_cast<size_t>(i)] / p.back();
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (int i = 0; i < deg; ++i) {
        const auto ev = es.eigenvalues()[i];
        if (std::abs(ev.imag()) <= 1e-7 * (1.0 + std::abs(ev.real()))) {
            roots.push_back(ev.real());
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// y-polynomial view: coefficients in y are polynomials in x
std::array<Poly, 3> y_coeffs(const Quad& q) {
    return {Poly{q.q0, 2.0 * q.qx, q.qxx}, Poly{2.0 * q.qy, 2.0 * q.qxy}, Poly{q.qyy}};
}

int effective_deg(const std::array<Poly, 3>& c, double scale) {
    auto big = [&](const Poly& p) {
        for (double v : p) {
            if (std::abs(v) > 1e-13 * std::max(scale, 1e-30)) return true;
        }
        return false;
    };
    if (big(c[2])) return 2;
    if (big(c[1])) return 1;
    return 0;
}

std::vector<double> solve_quadratic(double a, double b, double c, double scale) {
    std::vector<double> out;
    if (std::abs(a) <= 1e-13 * std::max(scale, 1e-30)) {
        if (std::abs(b) > 1e-13 * std::max(scale, 1e-30)) out.push_back(-c / b);
        return out;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return out;
    const double sq = std::sqrt(disc);
    // numerically stable pair
    const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    out.push_back(q / a);
    if (q != 0.0) out.push_back(c / q);
    else out.push_back(0.0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> y_solutions(const Quad& q, double x, double scale) {
    return solve_quadratic(q.qyy, 2.0 * (q.qxy * x + q.qy),
                           q.qxx * x * x + 2.0 * q.qx * x + q.q0, scale);
}

struct Pt { double x, y; };

// relative residual after damped Newton refinement of the 2x2 system
double newton_polish(const Quad& f, const Quad& g, Pt& pt, double scale) {
    auto merit = [&](const Pt& q) {
        const double fv = f.eval(q.x, q.y), gv = g.eval(q.x, q.y);
        return std::max(std::abs(fv), std::abs(gv));
    };
    for (int it = 0; it < 60; ++it) {
        const double fv = f.eval(pt.x, pt.y), gv = g.eval(pt.x, pt.y);
        const double res = std::max(std::abs(fv), std::abs(gv));
        const double local = std::max(1.0, pt.x * pt.x + pt.y * pt.y) * std::max(scale, 1e-30);
        if (res <= 1e-13 * local) return 0.0;
        const double j11 = f.dx(pt.x, pt.y), j12 = f.dy(pt.x, pt.y);
        const double j21 = g.dx(pt.x, pt.y), j22 = g.dy(pt.x, pt.y);
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) <= 1e-300) break;
        const double dx = (j22 * fv - j12 * gv) / det;
        const double dy = (-j21 * fv + j11 * gv) / det;
        double step = 1.0;
        Pt next{pt.x - dx, pt.y - dy};
        for (int h = 0; h < 25 && merit(next) >= res; ++h) {
            step *= 0.5;
            next = {pt.x - step * dx, pt.y - step * dy};
        }
        if (merit(next) >= res) break;  // stalled
        pt = next;
    }
    const double local = std::max(1.0, pt.x * pt.x + pt.y * pt.y) * std::max(scale, 1e-30);
    return merit(pt) / local;
}

// intersection points of two conics via the degree-4 resultant in x
std::vector<Pt> conic_intersect(const Quad& f, const Quad& g, bool& residual_failure) {
    std::vector<Pt> pts;
    const double scale = std::max(f.scale(), g.scale());
    auto fc = y_coeffs(f), gc = y_coeffs(g);
    const int df = effective_deg(fc, f.scale());
    const int dg = effective_deg(gc, g.scale());

    auto add_candidates_at = [&](double x) {
        std::vector<double> ys = y_solutions(f, x, f.scale());
        const std::vector<double> ys2 = y_solutions(g, x, g.scale());
        ys.insert(ys.end(), ys2.begin(), ys2.end());
        for (double y : ys) {
            Pt pt{x, y};
            const double res = newton_polish(f, g, pt, scale);
            if (res > 1e-7) {
                // seeds stuck far from any root stem from complex intersection
                // pairs and carry no candidate; a near-miss is real trouble
                if (res <= 1e-4) residual_failure = true;
                continue;
            }
            bool dup = false;
            for (const Pt& q : pts) {
                if (std::hypot(q.x - pt.x, q.y - pt.y) <=
                    1e-9 * std::max(1.0, std::hypot(pt.x, pt.y))) {
                    dup = true;
                    break;
                }
            }
            if (!dup) pts.push_back(pt);
        }
    };

    if (df == 0 && dg == 0) return pts;  // unions of vertical lines; no isolated points
    if (df == 0 || dg == 0) {
        const Poly& px = (df == 0) ? fc[0] : gc[0];  // univariate in x
        for (double x : real_roots(px, scale)) add_candidates_at(x);
        return pts;
    }

    // Sylvester matrix of the y-polynomials, entries polynomial in x
    const size_t dim = static_cast<size_t>(df + dg);
    std::vector<std::vector<Poly>> syl(dim, std::vector<Poly>(dim, Poly{0.0}));
    for (int r = 0; r < dg; ++r) {
        for (int k = 0; k <= df; ++k) syl[static_cast<size_t>(r)][static_cast<size_t>(r + k)] = fc[static_cast<size_t>(df - k)];
    }
    for (int r = 0; r < df; ++r) {
        for (int k = 0; k <= dg; ++k) syl[static_cast<size_t>(dg + r)][static_cast<size_t>(r + k)] = gc[static_cast<size_t>(dg - k)];
    }
    Poly res = poly_det(std::move(syl));
    double res_scale = 0.0;
    for (double v : res) res_scale = std::max(res_scale, std::abs(v));
    if (res_scale <= 1e-12 * std::pow(std::max(scale, 1e-30), static_cast<double>(df + dg))) {
        return pts;  // common component; duplicates are removed by the caller
    }
    for (double x : real_roots(res, res_scale)) add_candidates_at(x);
    return pts;
}

// stationary points of x^2+y^2 on {q = 0}: intersect with the normal-line conic
Quad normal_cross(const Quad& q) {
    Quad c;
    c.qxx = q.qxy;
    c.qyy = -q.qxy;
    c.qxy = 0.5 * (q.qyy - q.qxx);
    c.qx = 0.5 * q.qy;
    c.qy = -0.5 * q.qx;
    c.q0 = 0.0;
    return c;
}

bool is_origin_circle(const Quad& q) {
    const double s = q.scale();
    return std::abs(q.qxy) <= 1e-13 * s && std::abs(q.qx) <= 1e-13 * s &&
           std::abs(q.qy) <= 1e-13 * s && std::abs(q.qxx - q.qyy) <= 1e-13 * s;
}

bool same_quadric(const Quad& a, const Quad& b) {
    // proportional coefficient vectors
    const double na = a.scale(), nb = b.scale();
    if (na == 0.0 || nb == 0.0) return na == nb;
    const std::array<double, 6> va{a.qxx, a.qyy, a.qxy, a.qx, a.qy, a.q0};
    const std::array<double, 6> vb{b.qxx, b.qyy, b.qxy, b.qx, b.qy, b.q0};
    double dot = 0.0;
    for (int i = 0; i < 6; ++i) dot += (va[static_cast<size_t>(i)] / na) * (vb[static_cast<size_t>(i)] / nb);
    const double sign = dot >= 0.0 ? 1.0 : -1.0;
    for (int i = 0; i < 6; ++i) {
        if (std::abs(va[static_cast<size_t>(i)] / na - sign * vb[static_cast<size_t>(i)] / nb) > 1e-11) return false;
    }
    return true;
}

}  // namespace

double default_eps_3d(const Ellipse& e0) {
    double smax = 0.0;
    for (const Vec& x : direction_grid(e0.dim(), 64)) {
        smax = std::max(smax, support_sq(e0, x));
    }
    return 1e-9 * std::max(smax, 1e-30);
}

ExactDecision decide_ee_3d_ex(const Ellipse& e0, const EllipticPolytope& p, double eps) {
    if (e0.dim() != 3 || p.dim() != 3) {
        throw std::invalid_argument("decide_ee_3d: dimension must be 3");
    }
    const bool auto_eps = eps < 0.0;
    if (auto_eps) eps = default_eps_3d(e0);
    const int N = p.count();
    bool residual_failure = false;

    for (int axis = 2; axis >= 0; --axis) {
        // shifted quadrics G_k = { f_k + eps = 0 }; feasible set f_k + eps <= 0
        std::vector<Quad> f(static_cast<size_t>(N));
        bool chart_vacuous = false;
        double coeff_scale = 0.0;
        for (int k = 0; k < N; ++k) {
            f[static_cast<size_t>(k)] = chart_quad(e0, p[k], axis);
            coeff_scale = std::max(coeff_scale, f[static_cast<size_t>(k)].scale());
        }
        if (auto_eps) {
            // keep eps resolvable against the constraint coefficients
            eps = std::max(eps, 1e-12 * coeff_scale);
        }
        for (int k = 0; k < N; ++k) f[static_cast<size_t>(k)].q0 += eps;
        // constant constraints decide immediately
        std::vector<const Quad*> active;
        for (const Quad& q : f) {
            const double s = std::max({std::abs(q.qxx), std::abs(q.qyy), std::abs(q.qxy),
                                       std::abs(q.qx), std::abs(q.qy)});
            if (s <= 1e-14 * std::max(1.0, std::abs(q.q0))) {
                if (q.q0 > 0.0) { chart_vacuous = true; break; }  // infeasible chart
                continue;  // constraint always satisfied
            }
            active.push_back(&q);
        }
        if (chart_vacuous) continue;

        auto feasible = [&](double x, double y) {
            const double r2 = x * x + y * y;
            // directions nearly orthogonal to this chart's axis live at huge
            // chart coordinates where the evaluation cannot resolve eps; the
            // max-modulus-coordinate chart finds them at r <= sqrt(2)
            if (!(r2 <= 1e12)) return false;
            for (const Quad& q : f) {
                const double noise = 1e-11 * std::max(1.0, r2) * std::max(q.scale(), 1e-30);
                if (q.eval(x, y) > std::min(noise, 0.25 * eps)) return false;
            }
            return true;
        };
        auto witness_of = [&](double x, double y) -> Vec {
            Vec X = Vec::Zero(3);
            const int i = (axis == 0) ? 1 : 0;
            const int j = (axis == 2) ? 1 : 2;
            X[i] = x;
            X[j] = y;
            X[axis] = 1.0;
            X /= X.norm();
            return X;
        };

        std::vector<Pt> candidates{{0.0, 0.0}};

        // duplicate quadrics participate once in the enumeration
        std::vector<const Quad*> uniq;
        for (const Quad* q : active) {
            bool dup = false;
            for (const Quad* u : uniq) {
                if (same_quadric(*q, *u)) { dup = true; break; }
            }
            if (!dup) uniq.push_back(q);
        }

        for (size_t i = 0; i < uniq.size(); ++i) {
            // distance minimizers on G_i
            if (is_origin_circle(*uniq[i])) {
                const double r2 = -uniq[i]->q0 / uniq[i]->qxx;
                if (r2 > 0.0) {
                    const double r = std::sqrt(r2);
                    candidates.push_back({r, 0.0});
                    candidates.push_back({-r, 0.0});
                    candidates.push_back({0.0, r});
                    candidates.push_back({0.0, -r});
                }
            } else {
                for (const Pt& pt : conic_intersect(*uniq[i], normal_cross(*uniq[i]), residual_failure)) {
                    candidates.push_back(pt);
                }
            }
            for (size_t j = i + 1; j < uniq.size(); ++j) {
                for (const Pt& pt : conic_intersect(*uniq[i], *uniq[j], residual_failure)) {
                    candidates.push_back(pt);
                }
            }
        }

        for (const Pt& pt : candidates) {
            if (feasible(pt.x, pt.y)) {
                return {false, witness_of(pt.x, pt.y)};
            }
        }
    }
    if (residual_failure) {
        throw std::runtime_error("decide_ee_3d: root-finding residual above 1e-7");
    }
    return {true, std::nullopt};
}

bool decide_ee_3d(const Ellipse& e0, const EllipticPolytope& p, double eps) {
    return decide_ee_3d_ex(e0, p, eps).inside;
}

}  // namespace ellipt
