#include "ellipt/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ellipt {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::MaxIter: return "max-iter";
    }
    return "unknown";
}

void LinearProgram::validate() const {
    const int n = num_vars();
    auto check_rows = [n](const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const char* what) {
        if (A.rows() != b.size()) throw std::invalid_argument(std::string("LinearProgram: ") + what + " rhs size");
        if (A.rows() > 0 && A.cols() != n) throw std::invalid_argument(std::string("LinearProgram: ") + what + " column count");
        if (!A.allFinite() || !b.allFinite()) throw std::invalid_argument(std::string("LinearProgram: ") + what + " has non-finite entries");
    };
    check_rows(A_eq, b_eq, "equality");
    check_rows(A_ub, b_ub, "inequality");
    if (!c.allFinite()) throw std::invalid_argument("LinearProgram: non-finite objective");
    if (lower.size() != 0 && lower.size() != n) throw std::invalid_argument("LinearProgram: lower bound size");
    if (upper.size() != 0 && upper.size() != n) throw std::invalid_argument("LinearProgram: upper bound size");
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Standard form min c'x, Ax = b, x >= 0 produced from a LinearProgram.
// Free variables are split, finite lower bounds shifted, finite upper
// bounds turned into extra <=-rows before the slack columns.
struct Standard {
    MatrixXd A;
    VectorXd b, c;
    int m = 0, n = 0;
    int n_orig = 0;
    // orig var j -> (pos column, neg column or -1, shift)
    std::vector<int> pos_col, neg_col;
    VectorXd shift;
    int first_slack = 0;          // first slack column
    int n_eq_rows = 0;            // rows 0..n_eq_rows-1 came from A_eq
    std::vector<int> ub_row_of;   // standard row index of each A_ub row
    double obj_offset = 0.0;
};

Standard to_standard(const LinearProgram& lp) {
    lp.validate();
    const int n0 = lp.num_vars();
    VectorXd lo = lp.lower.size() ? lp.lower : VectorXd::Constant(n0, -kInf);
    VectorXd up = lp.upper.size() ? lp.upper : VectorXd::Constant(n0, kInf);

    Standard st;
    st.n_orig = n0;
    st.pos_col.assign(n0, -1);
    st.neg_col.assign(n0, -1);
    st.shift = VectorXd::Zero(n0);

    int ncols = 0;
    for (int j = 0; j < n0; ++j) {
        if (lo[j] == -kInf) {
            st.pos_col[j] = ncols++;
            st.neg_col[j] = ncols++;
        } else {
            st.pos_col[j] = ncols++;
            st.shift[j] = lo[j];
        }
    }
    // extra rows for finite upper bounds: x_j - shift <= up - shift
    std::vector<int> ub_bound_vars;
    for (int j = 0; j < n0; ++j) {
        if (up[j] != kInf) ub_bound_vars.push_back(j);
    }

    const int m_eq = static_cast<int>(lp.A_eq.rows());
    const int m_ub = static_cast<int>(lp.A_ub.rows());
    const int m_bnd = static_cast<int>(ub_bound_vars.size());
    const int m = m_eq + m_ub + m_bnd;
    const int n = ncols + m_ub + m_bnd;  // slacks for all <=-rows

    st.A = MatrixXd::Zero(m, n);
    st.b = VectorXd::Zero(m);
    st.c = VectorXd::Zero(n);
    st.m = m;
    st.n = n;
    st.first_slack = ncols;
    st.n_eq_rows = m_eq;

    auto scatter_row = [&](int row, const Eigen::RowVectorXd& a, double rhs) {
        double r = rhs;
        for (int j = 0; j < n0; ++j) {
            const double v = a[j];
            if (v == 0.0) continue;
            st.A(row, st.pos_col[j]) = v;
            if (st.neg_col[j] >= 0) st.A(row, st.neg_col[j]) = -v;
            r -= v * st.shift[j];
        }
        st.b[row] = r;
    };

    for (int i = 0; i < m_eq; ++i) scatter_row(i, lp.A_eq.row(i), lp.b_eq[i]);
    st.ub_row_of.resize(m_ub);
    for (int i = 0; i < m_ub; ++i) {
        const int row = m_eq + i;
        scatter_row(row, lp.A_ub.row(i), lp.b_ub[i]);
        st.A(row, ncols + i) = 1.0;
        st.ub_row_of[i] = row;
    }
    for (int k = 0; k < m_bnd; ++k) {
        const int j = ub_bound_vars[static_cast<size_t>(k)];
        const int row = m_eq + m_ub + k;
        st.A(row, st.pos_col[j]) = 1.0;
        if (st.neg_col[j] >= 0) st.A(row, st.neg_col[j]) = -1.0;
        st.b[row] = up[j] - st.shift[j];
        st.A(row, ncols + m_ub + k) = 1.0;
    }

    for (int j = 0; j < n0; ++j) {
        const double v = lp.c[j];
        if (v == 0.0) continue;
        st.c[st.pos_col[j]] = v;
        if (st.neg_col[j] >= 0) st.c[st.neg_col[j]] = -v;
        st.obj_offset += v * st.shift[j];
    }
    return st;
}

struct SimplexCore {
    const MatrixXd& A;
    VectorXd b;  // sign-normalized
    int m, n;
    std::vector<int> basis;
    MatrixXd Binv;
    int pivots_since_factor = 0;

    SimplexCore(const MatrixXd& A_, const VectorXd& b_) : A(A_), b(b_), m(static_cast<int>(A_.rows())), n(static_cast<int>(A_.cols())) {}

    bool refactor() {
        MatrixXd B(m, m);
        for (int i = 0; i < m; ++i) B.col(i) = A.col(basis[static_cast<size_t>(i)]);
        Eigen::FullPivLU<MatrixXd> lu(B);
        if (!lu.isInvertible()) return false;
        Binv = lu.inverse();
        pivots_since_factor = 0;
        return true;
    }

    // One simplex phase on objective cost (length n; entering restricted to
    // cols < allowed_cols).  Returns Optimal/Unbounded/MaxIter.
    SolveStatus run(const VectorXd& cost, int allowed_cols, int max_iter, int& iters, double tol) {
        const double rc_tol = tol * std::max(1.0, cost.cwiseAbs().maxCoeff());
        const double piv_tol = 1e-9;
        std::vector<char> in_basis(static_cast<size_t>(n), 0);
        for (int i : basis) in_basis[static_cast<size_t>(i)] = 1;

        VectorXd xB = Binv * b;
        double last_obj = kInf;
        int stalled = 0;
        bool bland = false;

        for (;; ++iters) {
            if (iters >= max_iter) return SolveStatus::MaxIter;
            VectorXd cB(m);
            for (int i = 0; i < m; ++i) cB[i] = cost[basis[static_cast<size_t>(i)]];
            const double obj = cB.dot(xB);
            if (obj < last_obj - 1e-12 * (1.0 + std::abs(last_obj))) {
                stalled = 0;
                if (bland) bland = false;
            } else if (++stalled > 50) {
                bland = true;  // anti-cycling fallback
            }
            last_obj = obj;

            VectorXd y = Binv.transpose() * cB;
            VectorXd rc = cost - A.transpose() * y;

            int enter = -1;
            if (!bland) {
                double best = -rc_tol;
                for (int j = 0; j < allowed_cols; ++j) {
                    if (!in_basis[static_cast<size_t>(j)] && rc[j] < best) {
                        best = rc[j];
                        enter = j;
                    }
                }
            } else {
                for (int j = 0; j < allowed_cols; ++j) {
                    if (!in_basis[static_cast<size_t>(j)] && rc[j] < -rc_tol) {
                        enter = j;
                        break;
                    }
                }
            }
            if (enter < 0) return SolveStatus::Optimal;

            VectorXd d = Binv * A.col(enter);
            int leave = -1;
            double best_ratio = kInf;
            for (int i = 0; i < m; ++i) {
                if (d[i] > piv_tol) {
                    const double ratio = std::max(xB[i], 0.0) / d[i];
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 && leave >= 0 &&
                         basis[static_cast<size_t>(i)] < basis[static_cast<size_t>(leave)])) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return SolveStatus::Unbounded;

            // pivot: update basis and Binv
            in_basis[static_cast<size_t>(basis[static_cast<size_t>(leave)])] = 0;
            in_basis[static_cast<size_t>(enter)] = 1;
            basis[static_cast<size_t>(leave)] = enter;
            const double piv = d[leave];
            Binv.row(leave) /= piv;
            for (int i = 0; i < m; ++i) {
                if (i != leave && d[i] != 0.0) Binv.row(i) -= d[i] * Binv.row(leave);
            }
            if (++pivots_since_factor >= 300) {
                if (!refactor()) return SolveStatus::MaxIter;
            }
            xB = Binv * b;
            for (int i = 0; i < m; ++i) {
                if (xB[i] < 0.0 && xB[i] > -1e-9) xB[i] = 0.0;
            }
        }
    }
};

}  // namespace

SolveReport solve_lp(const LinearProgram& lp, double tol, SimplexBasis* warm) {
    Standard st = to_standard(lp);
    SolveReport rep;
    const int m = st.m, n = st.n;

    if (m == 0) {
        // only bounds; optimum at the active bounds (all shifted vars at 0)
        rep.status = SolveStatus::Optimal;
        for (int j = 0; j < st.n_orig; ++j) {
            if (st.neg_col[j] >= 0 && lp.c[j] != 0.0) {
                rep.status = SolveStatus::Unbounded;
            }
            if (st.neg_col[j] < 0 && lp.c[j] < 0.0) rep.status = SolveStatus::Unbounded;
        }
        rep.x = st.shift;
        rep.value = lp.c.size() ? lp.c.dot(rep.x) : 0.0;
        return rep;
    }

    // sign-normalize rows so that b >= 0 (phase-1 artificial basis)
    MatrixXd A = st.A;
    VectorXd b = st.b;
    for (int i = 0; i < m; ++i) {
        if (b[i] < 0.0) {
            A.row(i) *= -1.0;
            b[i] *= -1.0;
        }
    }

    // artificial columns appended after the real ones
    MatrixXd A_full(m, n + m);
    A_full.leftCols(n) = A;
    A_full.rightCols(m) = MatrixXd::Identity(m, m);

    SimplexCore core(A_full, b);
    core.basis.resize(static_cast<size_t>(m));

    int iters = 0;
    const int max_iter = 50 * (m + n) + 10000;
    bool have_start = false;

    if (warm && warm->valid() && static_cast<int>(warm->cols.size()) == m) {
        bool ok = std::all_of(warm->cols.begin(), warm->cols.end(), [n](int j) { return j >= 0 && j < n; });
        if (ok) {
            core.basis = warm->cols;
            if (core.refactor()) {
                VectorXd xB = core.Binv * b;
                if ((xB.array() > -1e-9).all()) have_start = true;
            }
        }
    }

    if (!have_start) {
        for (int i = 0; i < m; ++i) core.basis[static_cast<size_t>(i)] = n + i;
        core.Binv = MatrixXd::Identity(m, m);
        // phase 1: minimize sum of artificials
        VectorXd cost1 = VectorXd::Zero(n + m);
        cost1.tail(m).setOnes();
        SolveStatus s1 = core.run(cost1, n + m, max_iter, iters, tol);
        rep.iterations = iters;
        if (s1 == SolveStatus::MaxIter) {
            rep.status = SolveStatus::MaxIter;
            rep.message = "phase 1 iteration limit";
            return rep;
        }
        VectorXd xB = core.Binv * b;
        double art = 0.0;
        for (int i = 0; i < m; ++i) {
            if (core.basis[static_cast<size_t>(i)] >= n) art += std::max(xB[i], 0.0);
        }
        if (art > tol * (1.0 + b.cwiseAbs().maxCoeff())) {
            rep.status = SolveStatus::Infeasible;
            rep.value = art;
            rep.message = "phase 1 optimum positive";
            return rep;
        }
        // drive basic artificials out where possible (they stay at zero otherwise)
        for (int i = 0; i < m; ++i) {
            if (core.basis[static_cast<size_t>(i)] < n) continue;
            Eigen::RowVectorXd row = core.Binv.row(i) * A_full.leftCols(n);
            int enter = -1;
            for (int j = 0; j < n; ++j) {
                if (std::abs(row[j]) > 1e-7 &&
                    std::find(core.basis.begin(), core.basis.end(), j) == core.basis.end()) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) continue;  // redundant row; artificial pinned at zero
            VectorXd d = core.Binv * A_full.col(enter);
            const double piv = d[i];
            core.basis[static_cast<size_t>(i)] = enter;
            core.Binv.row(i) /= piv;
            for (int r = 0; r < m; ++r) {
                if (r != i && d[r] != 0.0) core.Binv.row(r) -= d[r] * core.Binv.row(i);
            }
        }
    }

    // phase 2
    VectorXd cost2 = VectorXd::Zero(n + m);
    cost2.head(n) = st.c;
    SolveStatus s2 = core.run(cost2, n, max_iter, iters, tol);
    rep.iterations = iters;
    if (s2 == SolveStatus::MaxIter) {
        rep.status = SolveStatus::MaxIter;
        rep.message = "phase 2 iteration limit";
        return rep;
    }
    if (s2 == SolveStatus::Unbounded) {
        rep.status = SolveStatus::Unbounded;
        return rep;
    }

    VectorXd x_std = VectorXd::Zero(n);
    VectorXd xB = core.Binv * b;
    for (int i = 0; i < m; ++i) {
        const int j = core.basis[static_cast<size_t>(i)];
        if (j < n) x_std[j] = xB[i];
    }

    rep.x = VectorXd::Zero(st.n_orig);
    for (int j = 0; j < st.n_orig; ++j) {
        double v = x_std[st.pos_col[j]] + st.shift[j];
        if (st.neg_col[j] >= 0) v -= x_std[st.neg_col[j]];
        rep.x[j] = v;
    }
    rep.value = lp.c.dot(rep.x);

    // duals of the normalized standard rows, mapped back through the sign flips
    VectorXd cB(m);
    for (int i = 0; i < m; ++i) cB[i] = cost2[core.basis[static_cast<size_t>(i)]];
    VectorXd y = core.Binv.transpose() * cB;
    for (int i = 0; i < m; ++i) {
        if (st.b[i] < 0.0) y[i] *= -1.0;
    }
    rep.y_eq = y.head(st.n_eq_rows);
    rep.y_ub.resize(lp.A_ub.rows());
    for (int i = 0; i < lp.A_ub.rows(); ++i) rep.y_ub[i] = y[st.ub_row_of[static_cast<size_t>(i)]];

    // residuals
    double pr = 0.0;
    if (lp.A_eq.rows() > 0) pr = (lp.A_eq * rep.x - lp.b_eq).cwiseAbs().maxCoeff();
    if (lp.A_ub.rows() > 0) pr = std::max(pr, (lp.A_ub * rep.x - lp.b_ub).cwiseMax(0.0).maxCoeff());
    rep.primal_residual = pr;
    rep.dual_residual = 0.0;
    rep.gap = 0.0;
    rep.status = SolveStatus::Optimal;

    if (warm) warm->cols = core.basis;
    return rep;
}

}  // namespace ellipt
