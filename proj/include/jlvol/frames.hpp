#pragma once

// Unit decompositions (Parseval frames) and the subspaces they come from.
//
// A family v_1..v_n in R^k gives a unit decomposition when
// sum_i v_i v_i^T = I_k. Equivalently the k x n matrix [v_1 ... v_n] has
// orthonormal rows, its Gram matrix is an orthogonal projection of rank k,
// and the v_i are the coordinates of P e_i for the projection P onto some
// k-dimensional subspace of R^n.

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace jlvol {

inline constexpr double kOrthTol = 1e-10;  ///< default orthonormality tolerance
inline constexpr double kCertTol = 1e-9;   ///< default unit-decomposition tolerance

/// n vectors in R^k, stored as the columns of a k x n matrix.
class FrameSet {
public:
    /// Columns of `columns` are the vectors. Throws StructuralError on an
    /// empty matrix, k > n, or non-finite entries.
    explicit FrameSet(Eigen::MatrixXd columns);

    /// Build from a list of k-vectors. All must share the same length.
    static FrameSet from_vectors(const std::vector<std::vector<double>>& vectors);

    std::size_t n() const noexcept { return static_cast<std::size_t>(m_.cols()); }
    std::size_t k() const noexcept { return static_cast<std::size_t>(m_.rows()); }

    Eigen::VectorXd vector(std::size_t i) const { return m_.col(static_cast<Eigen::Index>(i)); }
    const Eigen::MatrixXd& matrix() const noexcept { return m_; }

    /// Squared norms |v_i|^2 in input order.
    Eigen::VectorXd squared_norms() const { return m_.colwise().squaredNorm().transpose(); }

    /// sum_i v_i v_i^T.
    Eigen::MatrixXd frame_operator() const { return m_ * m_.transpose(); }

private:
    Eigen::MatrixXd m_;
};

/// A k-dimensional subspace H of R^n, carried by k basis rows in R^n.
/// Construction checks shape and finiteness only; orthonormality is checked
/// by check_orthonormal() and by every operation that needs it.
class Subspace {
public:
    explicit Subspace(Eigen::MatrixXd basis_rows);

    std::size_t n() const noexcept { return static_cast<std::size_t>(b_.cols()); }
    std::size_t k() const noexcept { return static_cast<std::size_t>(b_.rows()); }
    const Eigen::MatrixXd& basis() const noexcept { return b_; }

    /// max_{i,j} |<b_i, b_j> - delta_ij|.
    double orthonormality_defect() const;

    /// Throws ValidationError naming the worst row pair when the defect
    /// exceeds `tol`.
    void check_orthonormal(double tol = kOrthTol) const;

    /// The subspace spanned by the first k coordinate axes.
    static Subspace coordinate(std::size_t n, std::size_t k);

private:
    Eigen::MatrixXd b_;
};

/// Symmetric n x n matrix of inner products <v_i, v_j>.
class GramMatrix {
public:
    /// Symmetrizes from the upper triangle; throws StructuralError if the
    /// matrix is not square.
    explicit GramMatrix(const Eigen::MatrixXd& entries);

    std::size_t n() const noexcept { return static_cast<std::size_t>(g_.rows()); }
    const Eigen::MatrixXd& entries() const noexcept { return g_; }

private:
    Eigen::MatrixXd g_;
};

struct CertificationReport {
    bool certified = false;
    double deviation = 0.0;  ///< max |(sum v_i v_i^T - I_k)_{ab}|
    bool spans = false;      ///< numerically rank k; implied by certification
};

struct ProjectionReport {
    bool is_projection = false;
    double idempotency_deviation = 0.0;  ///< max |(G^2 - G)_{ij}|
    double trace_deviation = 0.0;        ///< |trace G - target_rank|
};

CertificationReport certify_unit_decomposition(const FrameSet& frame, double tol = kCertTol);

/// v_i = column i of the basis matrix, i.e. the coordinates of P e_i in the
/// row basis. Throws ValidationError if the basis is not orthonormal.
FrameSet project_standard_basis(const Subspace& subspace, double orth_tol = kOrthTol);

GramMatrix gram_matrix(const FrameSet& frame);

ProjectionReport is_projection_matrix(const GramMatrix& gram, std::size_t target_rank,
                                      double tol = kCertTol);

/// n x n matrix with orthonormal rows whose top k rows are [v_1 ... v_n].
/// Throws PreconditionError if the frame does not certify at `cert_tol`.
Eigen::MatrixXd orthogonal_completion(const FrameSet& frame, double cert_tol = kCertTol);

}  // namespace jlvol
