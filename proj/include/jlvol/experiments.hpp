#pragma once

// End-to-end checks of the ellipsoid and volume bounds for sections of the
// cube and projections of the cross-polytope, over constructed and random
// subspaces.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jlvol/ellipsoids.hpp"
#include "jlvol/frames.hpp"

namespace jlvol {

inline constexpr double kEllipsoidBoundTol = 1e-6;
inline constexpr double kVolumeBoundTol = 1e-9;
inline constexpr double kSandwichTol = 1e-6;
inline constexpr double kEqualityRelTol = 1e-6;
inline constexpr double kProfileTol = 1e-6;

inline const std::string kLownerRatio = "lowner_ratio";
inline const std::string kJohnRatio = "john_ratio";
inline const std::string kCubeRatio = "cube_section_ratio";
inline const std::string kCrossRatio = "cross_projection_ratio";

/// (k/n)^{k/2}
double bound_kn(std::size_t n, std::size_t k);
/// (n/k)^{k/2}
double bound_nk(std::size_t n, std::size_t k);

struct ExperimentReport {
    std::uint64_t trial_id = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::map<std::string, double> ratios;
    std::map<std::string, double> bounds;
    std::map<std::string, bool> passes;
    std::map<std::string, bool> equalities;
    bool profile_uniform = false;
    /// vol(Q^n cap H) * vol(cross projection), informational only.
    std::optional<double> volume_product;

    bool all_pass() const;
};

/// Haar-random k-dimensional subspace of R^n: Gram-Schmidt on k standard
/// normal vectors, resampling near-dependent draws.
Subspace random_subspace(std::size_t n, std::size_t k, std::uint64_t seed);

/// Löwner and John ellipsoid ratios against (k/n)^{k/2} and (n/k)^{k/2}.
ExperimentReport verify_ellipsoid_bounds(const Subspace& subspace, double eps = kLownerEps);

/// Exact cube-section and cross-projection volume ratios against
/// (n/k)^{k/2} and (k/n)^{k/2}, plus the sandwich against the ellipsoid
/// ratios: pass_cube requires cube <= john and pass_cross requires
/// cross >= lowner. Includes every field of verify_ellipsoid_bounds.
ExperimentReport verify_volume_bounds(const Subspace& subspace, double eps = kLownerEps);

struct ConjectureSummary {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t trials = 0;
    double min_cross_ratio = 0.0;
    double bound_2pow = 0.0;   ///< 2^{(k-n)/2}, conjectured lower bound
    double max_cube_ratio = 0.0;
    double bound_ball2 = 0.0;  ///< 2^{(n-k)/2}, proved upper bound
    std::vector<std::uint64_t> ball2_violations;  ///< trial ids; any entry is a bug
    /// First trial that undercuts the conjectured bound, with its basis.
    std::optional<std::uint64_t> counterexample_trial;
    std::optional<Subspace> counterexample;
};

ConjectureSummary conjecture_scan(std::size_t n, std::size_t k, std::size_t trials,
                                  std::uint64_t seed);

enum class SubspaceKind { Random, Equality };

struct RunSpec {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    SubspaceKind kind = SubspaceKind::Random;
    bool ellipsoid = true;
    bool volume = true;
};

struct SuiteConfig {
    std::vector<RunSpec> runs;
    double eps = kLownerEps;
    std::size_t threads = 0;  ///< 0 = hardware concurrency
};

struct SuiteResult {
    std::vector<ExperimentReport> reports;  ///< sorted by (n, k, trial_id)
    bool proved_bound_violation = false;
};

/// Throws StructuralError for an invalid config (bad n/k, volume requested
/// above the exact-volume limits, equality kind with k not dividing n).
void validate(const SuiteConfig& config);

/// Runs every trial; trial seeds are derive_seed(run.seed, trial_id).
SuiteResult run_suite(const SuiteConfig& config);

/// Parses {"eps": .., "threads": .., "runs": [{"n","k","trials","seed",
/// "subspace": "random"|"equality", "experiments": ["ellipsoid","volume"]}]}.
SuiteConfig parse_suite_config(const std::string& json_text);

/// Tolerance ledger line written at the top of every CSV.
std::string tolerance_header();

void write_csv(std::ostream& out, const std::vector<ExperimentReport>& reports);

}  // namespace jlvol
