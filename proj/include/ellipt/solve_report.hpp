#pragma once

#include <string>

#include "ellipt/types.hpp"

namespace ellipt {

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIter };

const char* to_string(SolveStatus s);

/// Common result type of the LP and SOCP backends.  When status is Optimal
/// the primal/dual residuals and the complementarity gap are below the
/// tolerance the solver was called with.
struct SolveReport {
    SolveStatus status = SolveStatus::MaxIter;
    double value = 0.0;

    Eigen::VectorXd x;      // primal solution
    Eigen::VectorXd y_eq;   // duals of equality rows
    Eigen::VectorXd y_ub;   // duals of inequality rows (LP only)
    Eigen::VectorXd z;      // cone duals (SOCP only)
    Eigen::VectorXd s;      // cone slacks (SOCP only)

    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double gap = 0.0;
    int iterations = 0;
    std::string message;
};

}  // namespace ellipt
