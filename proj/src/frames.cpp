#include "jlvol/frames.hpp"

#include <cmath>
#include <sstream>

#include "jlvol/errors.hpp"

namespace jlvol {

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) {
        throw StructuralError(std::string(what) + ": non-finite entry");
    }
}

// Orthogonalize `x` against the rows of `q` (first `rows` of them), twice.
Eigen::VectorXd residual(const Eigen::MatrixXd& q, Eigen::Index rows, Eigen::VectorXd x) {
    for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd coeff = q.topRows(rows) * x;
        x -= q.topRows(rows).transpose() * coeff;
    }
    return x;
}

}  // namespace

FrameSet::FrameSet(Eigen::MatrixXd columns) : m_(std::move(columns)) {
    if (m_.rows() < 1 || m_.cols() < 1) {
        throw StructuralError("frame: need n >= k >= 1");
    }
    if (m_.rows() > m_.cols()) {
        std::ostringstream os;
        os << "frame: k = " << m_.rows() << " exceeds n = " << m_.cols();
        throw StructuralError(os.str());
    }
    require_finite(m_, "frame");
}

FrameSet FrameSet::from_vectors(const std::vector<std::vector<double>>& vectors) {
    if (vectors.empty() || vectors.front().empty()) {
        throw StructuralError("frame: empty vector list");
    }
    const std::size_t k = vectors.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != k) {
            std::ostringstream os;
            os << "frame: vector " << i << " has " << vectors[i].size()
               << " coordinates, expected " << k;
            throw StructuralError(os.str());
        }
        for (std::size_t j = 0; j < k; ++j) {
            m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = vectors[i][j];
        }
    }
    return FrameSet(std::move(m));
}

Subspace::Subspace(Eigen::MatrixXd basis_rows) : b_(std::move(basis_rows)) {
    if (b_.rows() < 1 || b_.cols() < 1 || b_.rows() > b_.cols()) {
        throw StructuralError("subspace: need 1 <= k <= n");
    }
    require_finite(b_, "subspace");
}

double Subspace::orthonormality_defect() const {
    const Eigen::MatrixXd g = b_ * b_.transpose();
    return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

void Subspace::check_orthonormal(double tol) const {
    const Eigen::MatrixXd d =
        b_ * b_.transpose() - Eigen::MatrixXd::Identity(b_.rows(), b_.rows());
    Eigen::Index i = 0;
    Eigen::Index j = 0;
    const double worst = d.cwiseAbs().maxCoeff(&i, &j);
    if (worst > tol) {
        std::ostringstream os;
        os << "subspace: basis rows " << std::min(i, j) << " and " << std::max(i, j)
           << " are not orthonormal (deviation " << worst << " > " << tol << ")";
        throw ValidationError(os.str());
    }
}

Subspace Subspace::coordinate(std::size_t n, std::size_t k) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                              static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < b.rows(); ++i) b(i, i) = 1.0;
    return Subspace(std::move(b));
}

GramMatrix::GramMatrix(const Eigen::MatrixXd& entries) {
    if (entries.rows() != entries.cols() || entries.rows() < 1) {
        throw StructuralError("gram matrix must be square and non-empty");
    }
    g_ = entries.triangularView<Eigen::Upper>();
    g_.triangularView<Eigen::StrictlyLower>() = g_.transpose().triangularView<Eigen::StrictlyLower>();
}

CertificationReport certify_unit_decomposition(const FrameSet& frame, double tol) {
    const auto k = static_cast<Eigen::Index>(frame.k());
    const Eigen::MatrixXd s = frame.frame_operator();
    CertificationReport r;
    r.deviation = (s - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
    r.certified = r.deviation <= tol;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(frame.matrix());
    const auto& sv = svd.singularValues();
    r.spans = sv.size() == k && sv(k - 1) > 1e-8 * std::max(1.0, sv(0));
    return r;
}

FrameSet project_standard_basis(const Subspace& subspace, double orth_tol) {
    subspace.check_orthonormal(orth_tol);
    return FrameSet(subspace.basis());
}

GramMatrix gram_matrix(const FrameSet& frame) {
    return GramMatrix(frame.matrix().transpose() * frame.matrix());
}

ProjectionReport is_projection_matrix(const GramMatrix& gram, std::size_t target_rank,
                                      double tol) {
    const Eigen::MatrixXd& g = gram.entries();
    ProjectionReport r;
    r.idempotency_deviation = (g * g - g).cwiseAbs().maxCoeff();
    r.trace_deviation = std::abs(g.trace() - static_cast<double>(target_rank));
    r.is_projection = r.idempotency_deviation <= tol && r.trace_deviation <= tol;
    return r;
}

Eigen::MatrixXd orthogonal_completion(const FrameSet& frame, double cert_tol) {
    const auto cert = certify_unit_decomposition(frame, cert_tol);
    if (!cert.certified) {
        std::ostringstream os;
        os << "orthogonal completion: frame is not a unit decomposition (deviation "
           << cert.deviation << " > " << cert_tol << ")";
        throw PreconditionError(os.str());
    }
    const auto n = static_cast<Eigen::Index>(frame.n());
    const auto k = static_cast<Eigen::Index>(frame.k());

    // Working copy with orthonormalized rows; the returned top block is the
    // frame matrix verbatim.
    Eigen::MatrixXd q(n, n);
    q.topRows(k) = frame.matrix();
    for (Eigen::Index r = 0; r < k; ++r) {
        Eigen::VectorXd row = residual(q, r, q.row(r).transpose());
        q.row(r) = row.normalized().transpose();
    }

    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (Eigen::Index r = k; r < n; ++r) {
        Eigen::Index best = -1;
        double best_norm = -1.0;
        Eigen::VectorXd best_vec;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            Eigen::VectorXd res = residual(q, r, Eigen::VectorXd::Unit(n, j));
            const double nr = res.norm();
            if (nr > best_norm) {
                best_norm = nr;
                best = j;
                best_vec = std::move(res);
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        q.row(r) = (best_vec / best_norm).transpose();
    }

    Eigen::MatrixXd out = q;
    out.topRows(k) = frame.matrix();
    return out;
}

}  // namespace jlvol
