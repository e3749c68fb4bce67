#include "jlvol/linprog.hpp"

#include <cmath>

#include "jlvol/errors.hpp"

namespace jlvol {

LpSolution maximize_feasible_origin(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                    const Eigen::VectorXd& c) {
    const Eigen::Index m = a.rows();
    const Eigen::Index nv = a.cols();
    if (b.size() != m || c.size() != nv) throw StructuralError("lp: shape mismatch");
    if ((b.array() < 0.0).any()) throw StructuralError("lp: negative right-hand side");

    // Tableau rows 0..m-1 are constraints, row m is the objective (reduced
    // costs, negated). Columns: nv structural, m slack, then rhs.
    const Eigen::Index cols = nv + m + 1;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, cols);
    t.topLeftCorner(m, nv) = a;
    t.block(0, nv, m, m).setIdentity();
    t.col(cols - 1).head(m) = b;
    t.row(m).head(nv) = -c.transpose();

    Eigen::VectorXi basis(m);
    for (Eigen::Index i = 0; i < m; ++i) basis(i) = static_cast<int>(nv + i);

    const double tol = 1e-12;
    int pivots = 0;
    for (;;) {
        // Bland: lowest-index column with negative reduced cost.
        Eigen::Index enter = -1;
        for (Eigen::Index j = 0; j < nv + m; ++j) {
            if (t(m, j) < -tol) {
                enter = j;
                break;
            }
        }
        if (enter < 0) break;

        Eigen::Index leave = -1;
        double best = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (t(i, enter) > tol) {
                const double ratio = t(i, cols - 1) / t(i, enter);
                if (leave < 0 || ratio < best - tol ||
                    (std::abs(ratio - best) <= tol && basis(i) < basis(leave))) {
                    leave = i;
                    best = ratio;
                }
            }
        }
        if (leave < 0) throw DegenerateBodyError("lp: objective is unbounded");

        t.row(leave) /= t(leave, enter);
        for (Eigen::Index i = 0; i <= m; ++i) {
            if (i != leave && t(i, enter) != 0.0) t.row(i) -= t(i, enter) * t.row(leave);
        }
        basis(leave) = static_cast<int>(enter);
        ++pivots;
    }

    LpSolution sol;
    sol.value = t(m, cols - 1);
    sol.x = Eigen::VectorXd::Zero(nv);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (basis(i) < nv) sol.x(basis(i)) = t(i, cols - 1);
    }
    sol.pivots = pivots;
    return sol;
}

double max_over_symmetric_slab(const Eigen::MatrixXd& functionals, const Eigen::VectorXd& u) {
    const Eigen::Index k = functionals.rows();
    const Eigen::Index m = functionals.cols();
    if (u.size() != k) throw StructuralError("lp: direction dimension mismatch");
    // y = y+ - y-, rows G^T y <= 1 and -G^T y <= 1.
    Eigen::MatrixXd a(2 * m, 2 * k);
    const Eigen::MatrixXd gt = functionals.transpose();
    a << gt, -gt, -gt, gt;
    Eigen::VectorXd c(2 * k);
    c << u, -u;
    return maximize_feasible_origin(a, Eigen::VectorXd::Ones(2 * m), c).value;
}

}  // namespace jlvol
