#pragma once

#include <vector>

#include "ellipt/solve_report.hpp"

namespace ellipt {

/// minimize c'x  subject to  A_eq x = b_eq,  A_ub x <= b_ub,
/// lower <= x <= upper (entries may be +-inf).
struct LinearProgram {
    Eigen::VectorXd c;
    Eigen::MatrixXd A_eq;
    Eigen::VectorXd b_eq;
    Eigen::MatrixXd A_ub;
    Eigen::VectorXd b_ub;
    Eigen::VectorXd lower;  // empty = all -inf... defaulted in validate()
    Eigen::VectorXd upper;  // empty = all +inf

    int num_vars() const { return static_cast<int>(c.size()); }
    void validate() const;
};

/// Basis of the internal standard form; opaque except for reuse between
/// solves of LPs with identical structure (only rhs changed).
struct SimplexBasis {
    std::vector<int> cols;
    bool valid() const { return !cols.empty(); }
};

/// Dense primal simplex, Dantzig pricing with Bland's rule engaged after
/// 50 stalled pivots.  Deterministic: identical inputs give bitwise
/// identical reports.
SolveReport solve_lp(const LinearProgram& lp, double tol = 1e-8,
                     SimplexBasis* warm = nullptr);

}  // namespace ellipt
