#pragma once

// Majorization order and the realizability of squared-norm profiles.
//
// A profile c in R^n is the list of squared lengths of some unit
// decomposition in R^k exactly when (1,...,1,0,...,0) with k ones majorizes
// c. construct_realization() builds such a frame by Givens rotations.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "jlvol/frames.hpp"

namespace jlvol {

inline constexpr double kMajTol = 1e-9;    ///< realizability tolerance
inline constexpr double kRealizeTol = 1e-8;  ///< construction accuracy

/// Candidate squared norms c_i = |v_i|^2 for a unit decomposition in R^k.
struct NormProfile {
    std::vector<double> entries;
    std::size_t k = 0;

    std::size_t n() const noexcept { return entries.size(); }
};

/// a majorizes b: every top-m prefix sum of a is at least that of b (less
/// `tol`), and the totals agree within `tol`. Throws StructuralError on a
/// length mismatch or non-finite input.
bool majorizes(const std::vector<double>& a, const std::vector<double>& b, double tol = kMajTol);

/// First prefix length m (1-based) at which a fails to majorize b; m = n + 1
/// stands for the total-sum condition. Empty when a majorizes b.
std::optional<std::size_t> first_violated_prefix(const std::vector<double>& a,
                                                 const std::vector<double>& b,
                                                 double tol = kMajTol);

/// (1,...,1,0,...,0) with k ones and n - k zeros.
std::vector<double> rank_k_spectrum(std::size_t n, std::size_t k);

/// Throws StructuralError if profile.entries.size() != n or k > n.
bool is_realizable(const NormProfile& profile, std::size_t n, double tol = kMajTol);

/// Frame in R^k whose squared norms are profile.entries, in input order.
/// Throws PreconditionError reporting the first violated prefix when the
/// profile is not realizable at kMajTol.
FrameSet construct_realization(const NormProfile& profile, std::size_t n);

/// Deterministic random realizable profile: exponential variates scaled to
/// sum k, with any excess above 1 pushed into the remaining headroom.
NormProfile random_realizable_profile(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace jlvol
