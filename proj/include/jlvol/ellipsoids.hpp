#pragma once

// Origin-centred ellipsoids {x : <A x, x> <= 1}, the minimum-volume
// ellipsoid enclosing a symmetric point set, and the maximal inscribed
// ellipsoid of a cube section obtained from it by polarity.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "jlvol/frames.hpp"

namespace jlvol {

inline constexpr double kLownerEps = 1e-7;
inline constexpr long kLownerMaxIter = 1'000'000;

class Ellipsoid {
public:
    /// Throws StructuralError if `a` is not square, not symmetric (beyond
    /// round-off), or not positive definite.
    explicit Ellipsoid(const Eigen::MatrixXd& a);

    std::size_t k() const noexcept { return static_cast<std::size_t>(a_.rows()); }
    const Eigen::MatrixXd& matrix() const noexcept { return a_; }

    /// log det A via Cholesky.
    double log_det() const;

    /// <A x, x>
    double gauge_squared(const Eigen::VectorXd& x) const { return x.dot(a_ * x); }

private:
    Eigen::MatrixXd a_;
};

/// pi^{k/2} / Gamma(k/2 + 1)
double unit_ball_volume(std::size_t k);

/// vol(unit ball) / sqrt(det A)
double ellipsoid_volume(const Ellipsoid& e);

/// vol(e) / vol(unit ball) = det(A)^{-1/2}
double volume_ratio(const Ellipsoid& e);

/// Ellipsoid with matrix A^{-1}.
Ellipsoid polar_ellipsoid(const Ellipsoid& e);

struct LownerResult {
    Ellipsoid ellipsoid;
    std::vector<double> weights;  ///< design weights u, indexed like the input points
    long iterations = 0;
    double max_gauge = 0.0;        ///< max_i <A p_i, p_i>
};

/// Minimum-volume origin-centred ellipsoid containing {+-p_i}.
///
/// Solves the D-optimal design dual max log det sum_i u_i p_i p_i^T over the
/// simplex with Frank-Wolfe ascent plus away steps, and returns
/// A = (k sum_i u_i p_i p_i^T)^{-1}. On return max_i <A p_i, p_i> <= 1 + eps
/// and every point with u_i > 0 has <A p_i, p_i> >= 1 - eps.
///
/// Zero points are ignored. Throws DegenerateBodyError if the points do not
/// span R^k, SolverError if `max_iter` is reached.
LownerResult lowner_symmetric(const std::vector<Eigen::VectorXd>& points, double eps = kLownerEps,
                              long max_iter = kLownerMaxIter);

/// Columns of `frame` as points.
LownerResult lowner_symmetric(const FrameSet& frame, double eps = kLownerEps);

/// John ellipsoid of the cube section Q^n cap H in the coordinates of the
/// subspace basis: polar of the Löwner ellipsoid of the projected
/// cross-polytope.
Ellipsoid john_of_cube_section(const Subspace& subspace, double eps = kLownerEps);

struct CoveringReport {
    bool covers = false;
    double ratio = 0.0;            ///< vol(e) / vol(unit ball)
    double bound = 0.0;            ///< (k/n)^{k/2}
    bool equality_profile = false; ///< all |v_i|^2 within tol of k/n
    bool bound_holds = false;      ///< ratio >= bound - tol, or !covers
};

CoveringReport check_covering_bound(const FrameSet& frame, const Ellipsoid& e, double tol = 1e-6);

}  // namespace jlvol
