#pragma once

#include <Eigen/Dense>

namespace jlvol {

/// max c^T x  s.t.  A x <= b, x >= 0, with b >= 0 (the origin is feasible).
/// Dense tableau simplex with Bland's rule; meant for a few dozen rows.
/// Throws DegenerateBodyError if the program is unbounded.
struct LpSolution {
    double value = 0.0;
    Eigen::VectorXd x;
    int pivots = 0;
};

LpSolution maximize_feasible_origin(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                    const Eigen::VectorXd& c);

/// max <u, y> over {y : |<g_i, y>| <= 1}, functionals g_i as the columns of
/// `functionals`. Same as the gauge of y-direction u in the polar body.
double max_over_symmetric_slab(const Eigen::MatrixXd& functionals, const Eigen::VectorXd& u);

}  // namespace jlvol
