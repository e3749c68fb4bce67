#pragma once

// Origin-symmetric polytopes in R^k: sections of the cube Q^n and
// projections of the cross-polytope, expressed in subspace coordinates.
//
// Both representations store one representative per +-pair:
//   V-rep  K = conv{+-w_j}
//   H-rep  K = {y : |<g_i, y>| <= 1}
// so the polar of one is the other with the same vectors.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "jlvol/frames.hpp"

namespace jlvol {

inline constexpr double kGeoTol = 1e-9;
inline constexpr std::size_t kExactMaxDim = 5;
inline constexpr std::size_t kExactMaxGenerators = 14;

class Polytope {
public:
    enum class Rep { Vertices, Functionals };

    /// conv{+-w_j} reduced to its extreme points. Throws DegenerateBodyError
    /// if the points do not span R^k (origin not interior).
    static Polytope from_vertices(const Eigen::MatrixXd& points);

    /// {y : |<g_i, y>| <= 1}; zero and duplicate functionals collapse.
    /// Throws DegenerateBodyError if the functionals do not span R^k
    /// (unbounded body).
    static Polytope from_functionals(const Eigen::MatrixXd& functionals);

    std::size_t k() const noexcept { return static_cast<std::size_t>(vectors_.rows()); }
    Rep rep() const noexcept { return rep_; }
    bool is_vrep() const noexcept { return rep_ == Rep::Vertices; }

    /// Representatives as columns (vertices or functionals).
    const Eigen::MatrixXd& vectors() const noexcept { return vectors_; }

    /// How many input vectors collapsed onto each representative (counting
    /// +- as the same). Points dropped as non-extreme are not counted.
    const std::vector<int>& multiplicity() const noexcept { return multiplicity_; }

    /// Membership test; V-rep goes through a small linear program.
    bool contains(const Eigen::VectorXd& y, double tol = kGeoTol) const;

private:
    Polytope(Rep rep, Eigen::MatrixXd vectors, std::vector<int> multiplicity)
        : rep_(rep), vectors_(std::move(vectors)), multiplicity_(std::move(multiplicity)) {}

    Rep rep_;
    Eigen::MatrixXd vectors_;
    std::vector<int> multiplicity_;
};

/// {y : |<v_i, y>| <= 1}, which is Q^n cap H in subspace coordinates when
/// the frame comes from project_standard_basis. Requires a certified frame.
Polytope polytope_from_frame(const FrameSet& frame, double cert_tol = kCertTol);

/// conv{+-v_i}, the projection of the cross-polytope onto H. Requires a
/// certified frame with at least one non-zero vector.
Polytope cross_projection(const FrameSet& frame, double cert_tol = kCertTol);

/// Exact vertex set of an H-rep body (intersections of k independent
/// constraint hyperplanes that satisfy all constraints).
Polytope enumerate_vertices(const Polytope& p);

/// Exact volume for k <= kExactMaxDim and at most kExactMaxGenerators
/// representatives; throws UnsupportedDimensionError otherwise.
double volume(const Polytope& p);

struct VolumeEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::size_t samples = 0;
    std::size_t hits = 0;
};

/// Hit-or-miss Monte Carlo inside the Löwner ellipsoid of p. Deterministic
/// for a given (samples, seed) regardless of thread count.
VolumeEstimate estimate_volume(const Polytope& p, std::size_t samples, std::uint64_t seed);

/// h_K(u) = max_{y in K} <u, y>.
double support_function(const Polytope& p, const Eigen::VectorXd& direction);

/// Polar body. V-rep and H-rep swap with the same representatives.
Polytope polar(const Polytope& p);

/// The subspace where both volume bounds are attained: row j is
/// sqrt(k/n) times the indicator of the j-th block of n/k coordinates.
/// Throws PreconditionError unless k divides n.
Subspace equality_subspace(std::size_t n, std::size_t k);

/// vol(Q^k) = 2^k and vol(cross-polytope) = 2^k / k!.
double cube_volume(std::size_t k);
double cross_polytope_volume(std::size_t k);

}  // namespace jlvol
