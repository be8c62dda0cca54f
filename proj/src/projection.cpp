#include "ellipt/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ellipt {

namespace {

constexpr double kPi = std::numbers::pi;

double snap(double v) { return std::abs(v) < 1e-15 ? 0.0 : v; }

double alpha_m(int m) { return std::ldexp(kPi, -m); }  // 2^-m pi

void push_coeff(LiftedPolygonSystem::Row& row, int var, double v) {
    if (v != 0.0) row.coeffs.push_back({var, v});
}

}  // namespace

int LiftedPolygonSystem::num_nonzeros() const {
    int nnz = 0;
    for (const Row& r : rows) nnz += static_cast<int>(r.coeffs.size());
    return nnz;
}

LiftedPolygonSystem build_lifted_polygon(int n) {
    return build_lifted_polygon(n, std::vector<double>(static_cast<size_t>(n), 0.0));
}

LiftedPolygonSystem build_lifted_polygon(int n, const std::vector<double>& shears) {
    if (n < 2) throw std::invalid_argument("build_lifted_polygon: level must be >= 2");
    if (static_cast<int>(shears.size()) != n) {
        throw std::invalid_argument("build_lifted_polygon: one shear per doubling expected");
    }
    LiftedPolygonSystem sys;
    sys.n = n;
    sys.shears = shears;

    // variables: 0 = r, 1..2n+2 = x_1..x_{2n+2}
    auto x = [](int i) { return i; };  // x_i lives at index i

    {   // 0 <= x_2
        LiftedPolygonSystem::Row row;  // -x_2 <= 0
        push_coeff(row, x(2), -1.0);
        sys.rows.push_back(row);
    }
    {   // x_2 cos(a_{n-1}) <= x_1 sin(a_{n-1})
        LiftedPolygonSystem::Row row;
        push_coeff(row, x(2), snap(std::cos(alpha_m(n - 1))));
        push_coeff(row, x(1), -snap(std::sin(alpha_m(n - 1))));
        sys.rows.push_back(row);
    }
    {   // x_1 cos(a_n) + x_2 sin(a_n) <= r cos(a_n)
        LiftedPolygonSystem::Row row;
        const double c = snap(std::cos(alpha_m(n))), s = snap(std::sin(alpha_m(n)));
        push_coeff(row, x(1), c);
        push_coeff(row, x(2), s);
        push_coeff(row, 0, -c);
        sys.rows.push_back(row);
    }

    for (int k = 1; k <= n; ++k) {
        const double a = alpha_m(n - k);
        const double c = snap(std::cos(a)), s = snap(std::sin(a));
        const double sh = shears[static_cast<size_t>(k - 1)] * 0.5;
        // rotated coordinates: xi = p1 c + p2 s, eta = -p1 s + p2 c
        // equality: xi' + sh*eta' = xi + sh*eta
        {
            LiftedPolygonSystem::Row row;
            row.equality = true;
            push_coeff(row, x(2 * k + 1), c - sh * s);
            push_coeff(row, x(2 * k + 2), s + sh * c);
            push_coeff(row, x(2 * k - 1), -(c - sh * s));
            push_coeff(row, x(2 * k), -(s + sh * c));
            sys.rows.push_back(row);
        }
        // |eta'| <= -eta, split into two inequalities
        {
            LiftedPolygonSystem::Row row;  // eta' + eta <= 0
            push_coeff(row, x(2 * k + 1), -s);
            push_coeff(row, x(2 * k + 2), c);
            push_coeff(row, x(2 * k - 1), -s);
            push_coeff(row, x(2 * k), c);
            sys.rows.push_back(row);
        }
        {
            LiftedPolygonSystem::Row row;  // -eta' + eta <= 0
            push_coeff(row, x(2 * k + 1), s);
            push_coeff(row, x(2 * k + 2), -c);
            push_coeff(row, x(2 * k - 1), -s);
            push_coeff(row, x(2 * k), c);
            sys.rows.push_back(row);
        }
    }
    return sys;
}

std::vector<Eigen::Vector2d> LiftedPolygonSystem::polygon_vertices(double r) const {
    using V2 = Eigen::Vector2d;
    std::vector<V2> verts;
    verts.push_back({0.0, 0.0});
    verts.push_back({r, 0.0});
    verts.push_back({r * std::cos(alpha_m(n - 1)), r * std::sin(alpha_m(n - 1))});

    for (int k = 1; k <= n; ++k) {
        const double a = alpha_m(n - k);
        const double c = std::cos(a), s = std::sin(a);
        const double sh = shears[static_cast<size_t>(k - 1)];
        std::vector<V2> next = verts;
        for (const V2& p : verts) {
            // affine symmetry about the line of angle a along the sheared direction
            const double xi = p.x() * c + p.y() * s;
            const double eta = -p.x() * s + p.y() * c;
            const double xi2 = xi + sh * eta, eta2 = -eta;
            V2 q{xi2 * c - eta2 * s, xi2 * s + eta2 * c};
            bool dup = false;
            for (const V2& u : next) {
                if ((u - q).norm() <= 1e-12 * std::max(1.0, r)) { dup = true; break; }
            }
            if (!dup) next.push_back(q);
        }
        verts = std::move(next);
    }
    // drop the interior fan centre
    std::vector<V2> out;
    for (const V2& p : verts) {
        if (p.norm() > 0.5 * r) out.push_back(p);
    }
    std::sort(out.begin(), out.end(), [](const V2& a, const V2& b) {
        return std::atan2(a.y(), a.x()) < std::atan2(b.y(), b.x());
    });
    return out;
}

int level_for_factor(double q) {
    for (int n = 2; n <= 40; ++n) {
        if (level_factor(n) >= q) return n;
    }
    return 40;
}

double level_factor(int n) { return std::cos(alpha_m(n)); }

PeLpResult pe_norm_lp_full(const Vec& w, const EllipticPolytope& p, int n, double tol,
                           SimplexBasis* warm) {
    const int d = p.dim();
    if (w.size() != d) throw std::invalid_argument("pe_norm_lp: dimension mismatch");
    if (n < 2) throw std::invalid_argument("pe_norm_lp: level must be >= 2");
    const int N = p.count();
    const int per = 2 * n + 3;  // variables per ellipse: r, x_1..x_{2n+2}

    const LiftedPolygonSystem sys = build_lifted_polygon(n);
    auto is_x2_bound = [](const LiftedPolygonSystem::Row& row) {
        return !row.equality && row.coeffs.size() == 1 && row.coeffs[0].first == 2;
    };
    int n_eq_rows = 0, n_ub_rows = 0;
    for (const auto& row : sys.rows) {
        if (is_x2_bound(row)) continue;  // carried as a variable bound instead
        (row.equality ? n_eq_rows : n_ub_rows)++;
    }

    LinearProgram lp;
    lp.c = Vec::Zero(per * N);
    lp.A_eq = Mat::Zero(n_eq_rows * N + d, per * N);
    lp.b_eq = Vec::Zero(n_eq_rows * N + d);
    lp.A_ub = Mat::Zero(n_ub_rows * N, per * N);
    lp.b_ub = Vec::Zero(n_ub_rows * N);
    lp.lower = Vec::Constant(per * N, -kInf);
    lp.upper = Vec::Constant(per * N, kInf);

    int nnz = 0;
    for (int j = 0; j < N; ++j) {
        const int base = per * j;
        lp.c[base] = 1.0;                 // objective: sum r^(j)
        lp.lower[base] = 0.0;             // r^(j) >= 0
        lp.lower[base + 2] = 0.0;         // x_2 >= 0 (the first system row)
        int eq = n_eq_rows * j, ub = n_ub_rows * j;
        for (const auto& row : sys.rows) {
            if (is_x2_bound(row)) continue;  // variable bound; still in the stats counts
            if (row.equality) {
                for (const auto& [var, v] : row.coeffs) lp.A_eq(eq, base + var) = v;
                lp.b_eq[eq] = row.rhs;
                ++eq;
            } else {
                for (const auto& [var, v] : row.coeffs) lp.A_ub(ub, base + var) = v;
                lp.b_ub[ub] = row.rhs;
                ++ub;
            }
        }
        nnz += sys.num_nonzeros() + 1;  // + the r^(j) >= 0 row
        // w-rows: coefficients a_j, b_j on x_{2n+1}, x_{2n+2}
        for (int i = 0; i < d; ++i) {
            const double va = p[j].a()[i], vb = p[j].b()[i];
            lp.A_eq(n_eq_rows * N + i, base + 2 * n + 1) = va;
            lp.A_eq(n_eq_rows * N + i, base + 2 * n + 2) = vb;
            if (va != 0.0) ++nnz;
            if (vb != 0.0) ++nnz;
        }
    }
    for (int i = 0; i < d; ++i) {
        lp.b_eq[n_eq_rows * N + i] = w[i];
        if (w[i] != 0.0) ++nnz;
    }

    PeLpResult out;
    out.stats.variables = per * N;
    out.stats.constraints = (3 * n + 4) * N + d + 1;
    out.stats.nonzeros = nnz;

    SolveReport rep = solve_lp(lp, tol, warm);
    out.status = rep.status;
    if (rep.status == SolveStatus::Infeasible) {
        out.bracket.outside_span = true;
        out.bracket.lo = out.bracket.hi = kInf;
        return out;
    }
    if (rep.status != SolveStatus::Optimal) {
        throw std::runtime_error("pe_norm_lp: LP solver failed (" + rep.message + ")");
    }
    const double r = std::max(0.0, rep.value);
    out.lp_value = r;
    out.bracket.lo = r * level_factor(n);
    out.bracket.hi = r;
    out.bracket.dual = rep.y_eq.tail(d);
    if (out.bracket.dual.dot(w) < 0.0) out.bracket.dual *= -1.0;
    return out;
}

NormBracket pe_norm_lp(const Vec& w, const EllipticPolytope& p, int n) {
    return pe_norm_lp_full(w, p, n).bracket;
}

EeVerdict proj_decide(const Ellipse& e0, const EllipticPolytope& p, const ProjOptions& opts,
                      CutStats* stats) {
    const int n = opts.level > 0 ? opts.level
                                 : level_for_factor(std::sqrt(opts.target_factor));
    CutOptions copts;
    copts.target_factor = opts.target_factor;
    copts.max_iter = opts.max_iter;
    copts.oracle_factor = level_factor(n);
    SimplexBasis basis;  // reused across corner evaluations: only w changes
    NormOracle oracle = [&p, n, &basis](const Vec& w) {
        return pe_norm_lp_full(w, p, n, 1e-8, &basis).bracket;
    };
    EeVerdict v = cut_decide(e0, p, copts, oracle, stats);
    v.method = "projection";
    return v;
}

}  // namespace ellipt
