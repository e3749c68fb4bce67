#include "jlvol/ellipsoids.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "jlvol/errors.hpp"

namespace jlvol {

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw SolverError("design matrix lost positive definiteness");
    }
    return symmetrized(llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols())));
}

Eigen::MatrixXd design_matrix(const Eigen::MatrixXd& pts, const Eigen::VectorXd& u) {
    return symmetrized(pts * u.asDiagonal() * pts.transpose());
}

}  // namespace

Ellipsoid::Ellipsoid(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols() || a.rows() < 1) {
        throw StructuralError("ellipsoid: matrix must be square and non-empty");
    }
    if (!a.allFinite()) throw StructuralError("ellipsoid: non-finite entry");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
        throw StructuralError("ellipsoid: matrix is not symmetric");
    }
    a_ = symmetrized(a);
    Eigen::LLT<Eigen::MatrixXd> llt(a_);
    if (llt.info() != Eigen::Success) {
        throw StructuralError("ellipsoid: matrix is not positive definite");
    }
}

double Ellipsoid::log_det() const {
    Eigen::LLT<Eigen::MatrixXd> llt(a_);
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double unit_ball_volume(std::size_t k) {
    const double h = 0.5 * static_cast<double>(k);
    return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

double volume_ratio(const Ellipsoid& e) { return std::exp(-0.5 * e.log_det()); }

double ellipsoid_volume(const Ellipsoid& e) { return unit_ball_volume(e.k()) * volume_ratio(e); }

Ellipsoid polar_ellipsoid(const Ellipsoid& e) {
    Eigen::LLT<Eigen::MatrixXd> llt(e.matrix());
    if (llt.info() != Eigen::Success) throw StructuralError("polar: singular ellipsoid matrix");
    return Ellipsoid(symmetrized(llt.solve(Eigen::MatrixXd::Identity(e.matrix().rows(),
                                                                     e.matrix().cols()))));
}

LownerResult lowner_symmetric(const std::vector<Eigen::VectorXd>& points, double eps,
                              long max_iter) {
    if (points.empty()) throw StructuralError("lowner: empty point set");
    const auto k = points.front().size();
    if (k < 1) throw StructuralError("lowner: zero-dimensional points");

    double scale = 0.0;
    for (const auto& p : points) {
        if (p.size() != k) throw StructuralError("lowner: points have mixed dimensions");
        if (!p.allFinite()) throw StructuralError("lowner: non-finite coordinate");
        scale = std::max(scale, p.norm());
    }

    // Zero points impose no constraint.
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].norm() > 1e-14 * scale) keep.push_back(i);
    }
    const auto m = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXd pts(k, std::max<Eigen::Index>(m, 1));
    pts.setZero();
    for (Eigen::Index j = 0; j < m; ++j) pts.col(j) = points[keep[static_cast<std::size_t>(j)]];

    {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(pts);
        const auto& sv = svd.singularValues();
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
            if (sv(i) > 1e-10 * std::max(scale, 1e-300)) ++rank;
        }
        if (m == 0 || rank < k) {
            std::ostringstream os;
            os << "lowner: points span only " << rank << " of " << k
               << " dimensions (deficient by " << (k - rank) << ")";
            throw DegenerateBodyError(os.str());
        }
    }

    const double kd = static_cast<double>(k);
    Eigen::VectorXd u = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
    Eigen::MatrixXd minv = spd_inverse(design_matrix(pts, u));

    long iter = 0;
    long since_refactor = 0;
    bool fresh = true;
    for (;;) {
        const Eigen::VectorXd g = (pts.transpose() * minv).cwiseProduct(pts.transpose()).rowwise().sum();

        Eigen::Index j = 0;
        const double gmax = g.maxCoeff(&j);
        Eigen::Index l = -1;
        double gmin = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (u(i) > 0.0 && (l < 0 || g(i) < gmin)) {
                l = i;
                gmin = g(i);
            }
        }
        const double eps_plus = gmax / kd - 1.0;
        const double eps_minus = 1.0 - gmin / kd;

        if (eps_plus <= eps && eps_minus <= eps) {
            if (fresh) break;
            minv = spd_inverse(design_matrix(pts, u));
            fresh = true;
            since_refactor = 0;
            continue;
        }
        if (iter >= max_iter) {
            std::ostringstream os;
            os << "lowner: no convergence after " << iter << " iterations (gap "
               << std::max(eps_plus, eps_minus) << ")";
            throw SolverError(os.str());
        }

        Eigen::Index idx = j;
        double gi = gmax;
        double tau = 0.0;
        if (eps_plus >= eps_minus) {
            tau = (gmax - kd) / (kd * (gmax - 1.0));
        } else {
            idx = l;
            gi = gmin;
            const double floor_tau = -u(l) / (1.0 - u(l));
            tau = gmin > 1.0 ? (gmin - kd) / (kd * (gmin - 1.0)) : floor_tau;
            tau = std::max(tau, floor_tau);
        }
        if (tau >= 1.0 && tau < 1.0 + 1e-12) {
            // Full step onto one point (k = 1): the design is that point alone.
            u.setZero();
            u(idx) = 1.0;
            minv = spd_inverse(design_matrix(pts, u));
            ++iter;
            fresh = true;
            since_refactor = 0;
            continue;
        }
        if (!(tau < 1.0) || tau == 0.0 || !std::isfinite(tau)) {
            std::ostringstream os;
            os << "lowner: degenerate step at iteration " << iter;
            throw SolverError(os.str());
        }

        const bool drop = idx == l && tau <= -u(l) / (1.0 - u(l));
        u *= (1.0 - tau);
        u(idx) += tau;
        if (drop) u(idx) = 0.0;

        // Sherman-Morrison update of ((1 - tau) M + tau p p^T)^{-1}.
        const Eigen::VectorXd w = minv * pts.col(idx);
        const double r = tau / (1.0 - tau);
        minv = (minv - (r / (1.0 + r * gi)) * (w * w.transpose())) / (1.0 - tau);

        ++iter;
        fresh = false;
        if (++since_refactor >= 1000) {
            minv = spd_inverse(design_matrix(pts, u));
            since_refactor = 0;
            fresh = true;
        }
    }

    const Eigen::MatrixXd a = minv / kd;
    std::vector<double> weights(points.size(), 0.0);
    for (Eigen::Index jj = 0; jj < m; ++jj) weights[keep[static_cast<std::size_t>(jj)]] = u(jj);

    Ellipsoid e(a);
    double max_gauge = 0.0;
    for (const auto& p : points) max_gauge = std::max(max_gauge, e.gauge_squared(p));
    return LownerResult{std::move(e), std::move(weights), iter, max_gauge};
}

LownerResult lowner_symmetric(const FrameSet& frame, double eps) {
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(frame.n());
    for (std::size_t i = 0; i < frame.n(); ++i) pts.push_back(frame.vector(i));
    return lowner_symmetric(pts, eps);
}

Ellipsoid john_of_cube_section(const Subspace& subspace, double eps) {
    return polar_ellipsoid(lowner_symmetric(project_standard_basis(subspace), eps).ellipsoid);
}

CoveringReport check_covering_bound(const FrameSet& frame, const Ellipsoid& e, double tol) {
    if (frame.k() != e.k()) throw StructuralError("covering: dimension mismatch");
    CoveringReport r;
    const double k = static_cast<double>(frame.k());
    const double n = static_cast<double>(frame.n());
    r.covers = true;
    r.equality_profile = true;
    for (std::size_t i = 0; i < frame.n(); ++i) {
        const Eigen::VectorXd v = frame.vector(i);
        if (e.gauge_squared(v) > 1.0 + tol) r.covers = false;
        if (std::abs(v.squaredNorm() - k / n) > tol) r.equality_profile = false;
    }
    r.ratio = volume_ratio(e);
    r.bound = std::pow(k / n, k / 2.0);
    r.bound_holds = !r.covers || r.ratio >= r.bound - tol;
    return r;
}

}  // namespace jlvol
