#pragma once

#include <vector>

#include "ellipt/solve_report.hpp"

namespace ellipt {

/// minimize c'x  subject to  A x = b,  x in K, where K is the product of
/// the declared blocks over the variable vector: free components,
/// nonnegative components, and second-order cones (x_0 >= |x_1..m-1|).
struct ConeProgram {
    Eigen::VectorXd c;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;

    struct Block {
        enum class Kind { Free, NonNeg, Soc };
        Kind kind;
        int size;
    };
    std::vector<Block> blocks;

    int num_vars() const { return static_cast<int>(c.size()); }
    void validate() const;
};

/// Primal-dual interior-point method on the Lorentz-cone product:
/// Nesterov-Todd scaling, Mehrotra predictor-corrector, dense factorization
/// of the reduced KKT system.  At most 200 iterations.
SolveReport solve_socp(const ConeProgram& cp, double tol = 1e-6);

}  // namespace ellipt
