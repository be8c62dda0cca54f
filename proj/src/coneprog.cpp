#include "ellipt/coneprog.hpp"

#include <cmath>
#include <stdexcept>

namespace ellipt {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void ConeProgram::validate() const {
    int total = 0;
    for (const Block& blk : blocks) {
        if (blk.size <= 0) throw std::invalid_argument("ConeProgram: nonpositive block size");
        if (blk.kind == Block::Kind::Soc && blk.size < 2) {
            throw std::invalid_argument("ConeProgram: second-order cone of size < 2");
        }
        total += blk.size;
    }
    if (total != num_vars()) throw std::invalid_argument("ConeProgram: blocks do not partition variables");
    if (A.rows() != b.size() || (A.rows() > 0 && A.cols() != num_vars())) {
        throw std::invalid_argument("ConeProgram: equality dimensions");
    }
    if (!c.allFinite() || !A.allFinite() || !b.allFinite()) {
        throw std::invalid_argument("ConeProgram: non-finite data");
    }
}

namespace {

// Cone layout: conic variables in declaration order form the slack space of
// the internal conelp formulation (G = -selector, h = 0).
struct Cone {
    struct Soc { int offset; int size; };    // offsets into the conic vector
    std::vector<int> nonneg_var;             // variable index per nonneg entry
    std::vector<int> soc_var_start;          // variable index of each cone head
    std::vector<Soc> socs;
    std::vector<int> var_of;                 // conic index -> variable index
    int dim = 0;                             // total conic entries
    int nn = 0;                              // leading nonneg entries
    int degree = 0;                          // nn + #socs
};

Cone build_cone(const ConeProgram& cp) {
    Cone cone;
    int var = 0;
    for (const auto& blk : cp.blocks) {
        if (blk.kind == ConeProgram::Block::Kind::NonNeg) {
            for (int i = 0; i < blk.size; ++i) cone.nonneg_var.push_back(var + i);
        }
        var += blk.size;
    }
    cone.nn = static_cast<int>(cone.nonneg_var.size());
    cone.var_of = cone.nonneg_var;
    var = 0;
    for (const auto& blk : cp.blocks) {
        if (blk.kind == ConeProgram::Block::Kind::Soc) {
            cone.socs.push_back({static_cast<int>(cone.var_of.size()), blk.size});
            cone.soc_var_start.push_back(var);
            for (int i = 0; i < blk.size; ++i) cone.var_of.push_back(var + i);
        }
        var += blk.size;
    }
    cone.dim = static_cast<int>(cone.var_of.size());
    cone.degree = cone.nn + static_cast<int>(cone.socs.size());
    return cone;
}

// componentwise for the nonneg part, Jordan algebra on each Lorentz block
struct ConeOps {
    const Cone& cone;
    explicit ConeOps(const Cone& c) : cone(c) {}

    VectorXd identity() const {
        VectorXd e = VectorXd::Zero(cone.dim);
        e.head(cone.nn).setOnes();
        for (const auto& s : cone.socs) e[s.offset] = 1.0;
        return e;
    }

    // largest t with u + t*e on the cone boundary is -min_eig; interior iff
    // min_eig(u) > 0
    double min_eig(const VectorXd& u) const {
        double m = kBig;
        for (int i = 0; i < cone.nn; ++i) m = std::min(m, u[i]);
        for (const auto& s : cone.socs) {
            m = std::min(m, u[s.offset] - u.segment(s.offset + 1, s.size - 1).norm());
        }
        return m;
    }

    VectorXd prod(const VectorXd& u, const VectorXd& v) const {
        VectorXd w(cone.dim);
        w.head(cone.nn) = u.head(cone.nn).cwiseProduct(v.head(cone.nn));
        for (const auto& s : cone.socs) {
            const auto u1 = u.segment(s.offset + 1, s.size - 1);
            const auto v1 = v.segment(s.offset + 1, s.size - 1);
            w[s.offset] = u.segment(s.offset, s.size).dot(v.segment(s.offset, s.size));
            w.segment(s.offset + 1, s.size - 1) = u[s.offset] * v1 + v[s.offset] * u1;
        }
        return w;
    }

    // solve lambda o x = r
    VectorXd solve_prod(const VectorXd& lambda, const VectorXd& r) const {
        VectorXd x(cone.dim);
        x.head(cone.nn) = r.head(cone.nn).cwiseQuotient(lambda.head(cone.nn));
        for (const auto& s : cone.socs) {
            const double l0 = lambda[s.offset];
            const auto l1 = lambda.segment(s.offset + 1, s.size - 1);
            const double r0 = r[s.offset];
            const auto r1 = r.segment(s.offset + 1, s.size - 1);
            const double det = l0 * l0 - l1.squaredNorm();
            const double x0 = (l0 * r0 - l1.dot(r1)) / det;
            x[s.offset] = x0;
            x.segment(s.offset + 1, s.size - 1) = (r1 - x0 * l1) / l0;
        }
        return x;
    }

    // max step t so that u + t*du stays in the cone (capped)
    double max_step(const VectorXd& u, const VectorXd& du) const {
        double t = kBig;
        for (int i = 0; i < cone.nn; ++i) {
            if (du[i] < 0.0) t = std::min(t, -u[i] / du[i]);
        }
        for (const auto& s : cone.socs) {
            const double u0 = u[s.offset], d0 = du[s.offset];
            const auto u1 = u.segment(s.offset + 1, s.size - 1);
            const auto d1 = du.segment(s.offset + 1, s.size - 1);
            // roots of (u0+t d0)^2 - |u1+t d1|^2 = 0
            const double a = d0 * d0 - d1.squaredNorm();
            const double bq = u0 * d0 - u1.dot(d1);
            const double c0 = u0 * u0 - u1.squaredNorm();
            double tb = kBig;
            const double disc = bq * bq - a * c0;
            if (std::abs(a) < 1e-14) {
                if (bq < 0.0) tb = -c0 / (2.0 * bq);
            } else if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                const double r1 = (-bq - sq) / a, r2 = (-bq + sq) / a;
                tb = kBig;
                if (r1 > 1e-14) tb = std::min(tb, r1);
                if (r2 > 1e-14) tb = std::min(tb, r2);
            }
            if (d0 < 0.0) tb = std::min(tb, -u0 / d0);
            t = std::min(t, tb);
        }
        return t;
    }

    static constexpr double kBig = 1e100;
};

// Nesterov-Todd scaling: W z = W^{-T} s = lambda per block.
struct Scaling {
    VectorXd w_nn;              // sqrt(s_i/z_i)
    std::vector<double> eta;    // per cone
    std::vector<VectorXd> wbar; // per cone, hyperbolic-normalized
    VectorXd lambda;
};

Scaling compute_scaling(const Cone& cone, const VectorXd& s, const VectorXd& z) {
    Scaling sc;
    sc.w_nn = (s.head(cone.nn).cwiseQuotient(z.head(cone.nn))).cwiseSqrt();
    sc.lambda.resize(cone.dim);
    sc.lambda.head(cone.nn) = (s.head(cone.nn).cwiseProduct(z.head(cone.nn))).cwiseSqrt();
    sc.eta.reserve(cone.socs.size());
    sc.wbar.reserve(cone.socs.size());
    for (const auto& blk : cone.socs) {
        const auto sseg = s.segment(blk.offset, blk.size);
        const auto zseg = z.segment(blk.offset, blk.size);
        const double as = std::sqrt(sseg[0] * sseg[0] - sseg.tail(blk.size - 1).squaredNorm());
        const double az = std::sqrt(zseg[0] * zseg[0] - zseg.tail(blk.size - 1).squaredNorm());
        VectorXd sb = sseg / as, zb = zseg / az;
        const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(zb)));
        VectorXd wb(blk.size);
        wb[0] = (sb[0] + zb[0]) / (2.0 * gamma);
        wb.tail(blk.size - 1) =
            (sb.tail(blk.size - 1) - zb.tail(blk.size - 1)) / (2.0 * gamma);
        const double eta = std::sqrt(as / az);
        sc.eta.push_back(eta);
        sc.wbar.push_back(wb);
        // lambda = W z
        VectorXd lam(blk.size);
        const auto z1 = zseg.tail(blk.size - 1);
        const double wz = wb.tail(blk.size - 1).dot(z1);
        lam[0] = eta * (wb[0] * zseg[0] + wz);
        lam.tail(blk.size - 1) =
            eta * (z1 + (zseg[0] + wz / (1.0 + wb[0])) * wb.tail(blk.size - 1));
        sc.lambda.segment(blk.offset, blk.size) = lam;
    }
    return sc;
}

// v -> H(wbar) v scaled by eta (W), or H(J wbar) v scaled by 1/eta (W^{-1})
VectorXd apply_W(const Cone& cone, const Scaling& sc, const VectorXd& v, bool inverse) {
    VectorXd out(cone.dim);
    if (inverse) {
        out.head(cone.nn) = v.head(cone.nn).cwiseQuotient(sc.w_nn);
    } else {
        out.head(cone.nn) = v.head(cone.nn).cwiseProduct(sc.w_nn);
    }
    for (size_t k = 0; k < cone.socs.size(); ++k) {
        const auto& blk = cone.socs[k];
        VectorXd wb = sc.wbar[k];
        double scale = sc.eta[k];
        if (inverse) {
            wb.tail(blk.size - 1) *= -1.0;
            scale = 1.0 / scale;
        }
        const auto v1 = v.segment(blk.offset + 1, blk.size - 1);
        const double wv = wb.tail(blk.size - 1).dot(v1);
        out[blk.offset] = scale * (wb[0] * v[blk.offset] + wv);
        out.segment(blk.offset + 1, blk.size - 1) =
            scale * (v1 + (v[blk.offset] + wv / (1.0 + wb[0])) * wb.tail(blk.size - 1));
    }
    return out;
}

// (W'W)^{-1} v = eta^{-2} (2 (Jw)(Jw)'v - J v) per cone; diagonal on nonneg
VectorXd apply_WtW_inv(const Cone& cone, const Scaling& sc, const VectorXd& v) {
    VectorXd out(cone.dim);
    out.head(cone.nn) = v.head(cone.nn).cwiseQuotient(sc.w_nn.cwiseAbs2());
    for (size_t k = 0; k < cone.socs.size(); ++k) {
        const auto& blk = cone.socs[k];
        const VectorXd& wb = sc.wbar[k];
        const double e2 = sc.eta[k] * sc.eta[k];
        VectorXd jw = wb;
        jw.tail(blk.size - 1) *= -1.0;
        const double dot = jw.dot(v.segment(blk.offset, blk.size));
        VectorXd jv = v.segment(blk.offset, blk.size);
        jv.tail(blk.size - 1) *= -1.0;
        out.segment(blk.offset, blk.size) = (2.0 * dot * jw - jv) / e2;
    }
    return out;
}

struct KktSolver {
    const ConeProgram& cp;
    const Cone& cone;
    int n, p;
    Eigen::PartialPivLU<MatrixXd> lu;
    MatrixXd M;

    KktSolver(const ConeProgram& cp_, const Cone& cone_)
        : cp(cp_), cone(cone_), n(cp_.num_vars()), p(static_cast<int>(cp_.A.rows())), M(n + p, n + p) {}

    // factor [H + dI, A'; A, -dI] with H = sel' (W'W)^{-1} sel
    void factor(const Scaling& sc, double reg) {
        M.setZero();
        for (int i = 0; i < cone.nn; ++i) {
            const int v = cone.nonneg_var[static_cast<size_t>(i)];
            M(v, v) = 1.0 / (sc.w_nn[i] * sc.w_nn[i]);
        }
        for (size_t k = 0; k < cone.socs.size(); ++k) {
            const auto& blk = cone.socs[k];
            const int v0 = cone.var_of[static_cast<size_t>(blk.offset)];
            const VectorXd& wb = sc.wbar[k];
            const double e2 = sc.eta[k] * sc.eta[k];
            VectorXd jw = wb;
            jw.tail(blk.size - 1) *= -1.0;
            MatrixXd Hb = (2.0 * jw * jw.transpose()) / e2;
            for (int i = 0; i < blk.size; ++i) Hb(i, i) -= (i == 0 ? 1.0 : -1.0) / e2;
            M.block(v0, v0, blk.size, blk.size) = Hb;
        }
        for (int i = 0; i < n; ++i) M(i, i) += reg;
        M.block(n, 0, p, n) = cp.A;
        M.block(0, n, n, p) = cp.A.transpose();
        for (int i = 0; i < p; ++i) M(n + i, n + i) = -reg;
        lu.compute(M);
    }

    // Solve the 3x3 system given rhs (bx, by, bz); returns dx, dy, dz.
    void solve(const Scaling& sc, const VectorXd& bx, const VectorXd& by, const VectorXd& bz,
               VectorXd& dx, VectorXd& dy, VectorXd& dz) const {
        VectorXd rhs(n + p);
        rhs.head(n) = bx;
        // + G'(W'W)^{-1} bz with G = -selector
        VectorXd t = apply_WtW_inv(cone, sc, bz);
        for (int i = 0; i < cone.dim; ++i) rhs[cone.var_of[static_cast<size_t>(i)]] -= t[i];
        rhs.tail(p) = by;
        VectorXd sol = lu.solve(rhs);
        // one refinement pass against the assembled saddle matrix
        VectorXd resid = rhs - M * sol;
        sol += lu.solve(resid);
        dx = sol.head(n);
        dy = sol.tail(p);
        // dz = (W'W)^{-1} (G dx - bz), G dx = -dx_conic
        VectorXd gdx(cone.dim);
        for (int i = 0; i < cone.dim; ++i) gdx[i] = -dx[cone.var_of[static_cast<size_t>(i)]];
        dz = apply_WtW_inv(cone, sc, gdx - bz);
    }
};

}  // namespace

SolveReport solve_socp(const ConeProgram& cp, double tol) {
    cp.validate();
    const Cone cone = build_cone(cp);
    const int n = cp.num_vars();
    const int p = static_cast<int>(cp.A.rows());
    ConeOps ops(cone);

    SolveReport rep;
    if (cone.dim == 0) throw std::invalid_argument("solve_socp: no conic blocks");

    auto gather = [&](const VectorXd& x) {
        VectorXd v(cone.dim);
        for (int i = 0; i < cone.dim; ++i) v[i] = x[cone.var_of[static_cast<size_t>(i)]];
        return v;
    };
    auto scatter_sub = [&](VectorXd& x, const VectorXd& zc) {  // x -= sel' zc
        for (int i = 0; i < cone.dim; ++i) x[cone.var_of[static_cast<size_t>(i)]] -= zc[i];
    };

    const double reg = 1e-10;
    KktSolver kkt(cp, cone);

    // --- initial point: W = I
    Scaling sc0;
    sc0.w_nn = VectorXd::Ones(cone.nn);
    sc0.eta.assign(cone.socs.size(), 1.0);
    for (const auto& blk : cone.socs) {
        VectorXd wb = VectorXd::Zero(blk.size);
        wb[0] = 1.0;
        sc0.wbar.push_back(wb);
    }
    kkt.factor(sc0, reg);

    VectorXd x, y, s, z, dx, dy, dz;
    {
        VectorXd bx = VectorXd::Zero(n), bz = VectorXd::Zero(cone.dim);
        kkt.solve(sc0, bx, cp.b, bz, x, y, dz);
        s = gather(x);
        const double me = ops.min_eig(s);
        if (me <= 0.0) s += (1.0 - me) * ops.identity();

        VectorXd xd, yd;
        kkt.solve(sc0, -cp.c, VectorXd::Zero(p), bz, xd, yd, dz);
        y = yd;
        z = -gather(xd);
        const double med = ops.min_eig(z);
        if (med <= 0.0) z += (1.0 - med) * ops.identity();
    }

    const int max_iter = 200;
    const double b_scale = std::max(1.0, cp.b.size() ? cp.b.norm() : 0.0);
    const double c_scale = std::max(1.0, cp.c.norm());

    for (int iter = 0; iter < max_iter; ++iter) {
        // residuals: rx = c + A'y + G'z; ry = A x - b; rz = s + G x
        VectorXd rx = cp.c;
        if (p > 0) rx += cp.A.transpose() * y;
        scatter_sub(rx, z);
        VectorXd ry = (p > 0) ? VectorXd(cp.A * x - cp.b) : VectorXd();
        VectorXd rz = s - gather(x);

        const double pcost = cp.c.dot(x);
        const double dcost = (p > 0) ? -cp.b.dot(y) : 0.0;
        const double gap = s.dot(z);
        const double relgap = gap / std::max(1.0, std::min(std::abs(pcost), std::abs(dcost)));
        const double pres = std::max(p > 0 ? ry.norm() / b_scale : 0.0, rz.norm() / std::max(1.0, s.norm()));
        const double dres = rx.norm() / c_scale;

        rep.iterations = iter;
        rep.x = x;
        rep.y_eq = y;
        rep.s = s;
        rep.z = z;
        rep.value = pcost;
        rep.primal_residual = pres;
        rep.dual_residual = dres;
        rep.gap = gap;

        if (pres <= tol && dres <= tol && (gap <= tol || relgap <= tol)) {
            rep.status = SolveStatus::Optimal;
            rep.message = "converged";
            return rep;
        }

        const Scaling sc = compute_scaling(cone, s, z);
        kkt.factor(sc, reg);
        const double mu = gap / cone.degree;

        // affine direction
        VectorXd ds_rhs = -ops.prod(sc.lambda, sc.lambda);
        VectorXd bz_aff = -rz - apply_W(cone, sc, ops.solve_prod(sc.lambda, ds_rhs), false);
        VectorXd dxa, dya, dza;
        kkt.solve(sc, -rx, p > 0 ? VectorXd(-ry) : VectorXd(), bz_aff, dxa, dya, dza);
        VectorXd dsa = apply_W(cone, sc, ops.solve_prod(sc.lambda, ds_rhs) - apply_W(cone, sc, dza, false), false);

        double alpha_aff = std::min({1.0, ops.max_step(s, dsa), ops.max_step(z, dza)});
        const double mu_aff = (s + alpha_aff * dsa).dot(z + alpha_aff * dza) / cone.degree;
        double sigma = std::pow(std::max(0.0, mu_aff / mu), 3.0);
        sigma = std::min(1.0, sigma);

        // combined direction with Mehrotra correction
        VectorXd corr = ops.prod(apply_W(cone, sc, dsa, true), apply_W(cone, sc, dza, false));
        ds_rhs = -ops.prod(sc.lambda, sc.lambda) - corr + sigma * mu * ops.identity();
        VectorXd bz_c = -rz - apply_W(cone, sc, ops.solve_prod(sc.lambda, ds_rhs), false);
        kkt.solve(sc, -rx, p > 0 ? VectorXd(-ry) : VectorXd(), bz_c, dx, dy, dz);
        VectorXd ds = apply_W(cone, sc, ops.solve_prod(sc.lambda, ds_rhs) - apply_W(cone, sc, dz, false), false);

        double alpha = std::min({1.0, 0.99 * ops.max_step(s, ds), 0.99 * ops.max_step(z, dz)});
        if (!std::isfinite(alpha) || alpha <= 1e-14) {
            rep.status = SolveStatus::MaxIter;
            rep.message = "step length collapsed";
            return rep;
        }

        x += alpha * dx;
        y += alpha * dy;
        s += alpha * ds;
        z += alpha * dz;
    }

    // heuristic infeasibility certificate: A'y + G'z ~ 0, z in K, b'y < 0
    {
        VectorXd cert = p > 0 ? VectorXd(cp.A.transpose() * y) : VectorXd::Zero(n);
        scatter_sub(cert, z);
        const double scale = std::max(1.0, y.norm() + z.norm());
        if (cert.norm() / scale < 1e-6 && ops.min_eig(z) > -1e-9 * scale &&
            (p > 0 && cp.b.dot(y) < -1e-6 * scale)) {
            rep.status = SolveStatus::Infeasible;
            rep.message = "approximate infeasibility certificate";
            return rep;
        }
    }
    rep.status = SolveStatus::MaxIter;
    rep.message = "iteration limit";
    return rep;
}

}  // namespace ellipt
