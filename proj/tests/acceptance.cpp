// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "jlvol/ellipsoids.hpp"
#include "jlvol/experiments.hpp"
#include "jlvol/frames.hpp"
#include "jlvol/majorization.hpp"
#include "jlvol/polytopes.hpp"
#include "jlvol/rng.hpp"
#include "oracles.hpp"

using namespace jlvol;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

// Shared sample for criteria 2 and 3.
struct Trial {
    Subspace subspace;
    ExperimentReport report;
};

std::vector<Trial>& random_trials() {
    static std::vector<Trial> trials = [] {
        std::vector<Trial> out;
        for (std::uint64_t t = 0; t < 500; ++t) {
            const std::uint64_t seed = derive_seed(2024, t);
            const std::size_t n = 1 + seed % 8;
            const std::size_t k = 1 + (seed >> 8) % std::min<std::size_t>(n, 4);
            auto sub = random_subspace(n, k, seed);
            auto rep = k <= kExactMaxDim ? verify_volume_bounds(sub) : verify_ellipsoid_bounds(sub);
            out.push_back({std::move(sub), std::move(rep)});
        }
        return out;
    }();
    return trials;
}

Outcome ac1_equality_cases() {
    Outcome o;
    double worst = 0;
    for (auto [n, k] : {std::pair<std::size_t, std::size_t>{2, 1}, {4, 2}, {6, 2}, {6, 3}, {8, 4}}) {
        const auto r = verify_volume_bounds(equality_subspace(n, k));
        const double lo = std::pow(double(k) / n, k / 2.0);
        const double hi = std::pow(double(n) / k, k / 2.0);
        const std::pair<std::string, double> expect[] = {
            {kLownerRatio, lo}, {kJohnRatio, hi}, {kCubeRatio, hi}, {kCrossRatio, lo}};
        for (const auto& [key, value] : expect) {
            const double err = std::abs(r.ratios.at(key) - value) / value;
            worst = std::max(worst, err);
            if (err > 1e-6) {
                o.pass = false;
                o.detail += " " + key + "(" + std::to_string(n) + "," + std::to_string(k) + ")";
            }
        }
    }
    o.detail = "max relative error " + fmt("%.3g", worst) + o.detail;
    return o;
}

Outcome ac2_lowner_bound() {
    Outcome o;
    std::size_t violations = 0, iff_failures = 0, uniform_seen = 0;
    for (const auto& t : random_trials()) {
        const auto& r = t.report;
        if (r.ratios.at(kLownerRatio) < bound_kn(r.n, r.k) - kEllipsoidBoundTol) ++violations;
        if (r.equalities.at(kLownerRatio) != r.profile_uniform) ++iff_failures;
        uniform_seen += r.profile_uniform;
    }
    // Constructed equality cases and small rotations of them.
    std::mt19937_64 rng(5);
    std::size_t constructed = 0;
    for (auto [n, k] : {std::pair<int, int>{2, 1}, {4, 2}, {6, 2}, {6, 3}, {8, 4}, {3, 1}, {9, 3}}) {
        const auto eq = equality_subspace(static_cast<std::size_t>(n), static_cast<std::size_t>(k));
        std::normal_distribution<double> normal;
        Eigen::MatrixXd g(n, n);
        for (auto& x : g.reshaped()) x = normal(rng);
        const Eigen::MatrixXd skew = 0.05 * (g - g.transpose());
        const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
        const Subspace near(eq.basis() * ((id - skew).inverse() * (id + skew)));
        for (const auto& s : {eq, near}) {
            const auto r = verify_ellipsoid_bounds(s);
            if (r.ratios.at(kLownerRatio) < bound_kn(r.n, r.k) - kEllipsoidBoundTol) ++violations;
            if (r.equalities.at(kLownerRatio) != r.profile_uniform) ++iff_failures;
            constructed += r.profile_uniform;
        }
    }
    o.pass = violations == 0 && iff_failures == 0 && constructed == 7;
    o.detail = "500 random + 14 constructed: " + std::to_string(violations) + " violations, " +
               std::to_string(iff_failures) + " iff mismatches, " + std::to_string(constructed + uniform_seen) +
               " uniform profiles";
    return o;
}

Outcome ac3_volume_bounds() {
    Outcome o;
    std::size_t checked = 0, failures = 0;
    double min_slack = 1e300;
    for (const auto& t : random_trials()) {
        const auto& r = t.report;
        if (r.k > kExactMaxDim) continue;
        ++checked;
        const double s_cube = bound_nk(r.n, r.k) - r.ratios.at(kCubeRatio);
        const double s_cross = r.ratios.at(kCrossRatio) - bound_kn(r.n, r.k);
        min_slack = std::min({min_slack, s_cube, s_cross});
        const bool sandwich = r.ratios.at(kCubeRatio) <= r.ratios.at(kJohnRatio) * (1 + kSandwichTol) &&
                              r.ratios.at(kCrossRatio) >= r.ratios.at(kLownerRatio) * (1 - kSandwichTol);
        if (s_cube < -kVolumeBoundTol || s_cross < -kVolumeBoundTol || !sandwich) ++failures;
    }
    o.pass = failures == 0 && checked == 500;
    o.detail = std::to_string(checked) + " trials, " + std::to_string(failures) + " failures, min slack " +
               fmt("%.3g", min_slack);
    return o;
}

Outcome ac4_realization() {
    Outcome o;
    std::size_t construct_fail = 0, sound_fail = 0;
    double worst_diag = 0, worst_dev = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const std::size_t n = 1 + derive_seed(77, s) % 10;
        const std::size_t k = 1 + derive_seed(78, s) % n;
        const auto p = random_realizable_profile(n, k, derive_seed(79, s));
        try {
            const auto f = construct_realization(p, n);
            const Eigen::VectorXd c = f.squared_norms();
            double diag = 0;
            for (std::size_t i = 0; i < n; ++i)
                diag = std::max(diag, std::abs(c(static_cast<Eigen::Index>(i)) - p.entries[i]));
            const double dev = (f.frame_operator() - Eigen::MatrixXd::Identity(long(k), long(k))).cwiseAbs().maxCoeff();
            worst_diag = std::max(worst_diag, diag);
            worst_dev = std::max(worst_dev, dev);
            if (diag > 1e-8 || dev > 1e-8) ++construct_fail;
        } catch (const std::exception&) {
            ++construct_fail;
        }
    }
    std::mt19937_64 rng(80);
    for (int t = 0; t < 1000; ++t) {
        const int n = 1 + t % 10;
        const int k = 1 + (t / 10) % n;
        const FrameSet f(oracle::haar_rows(n, k, rng));
        const Eigen::VectorXd c = f.squared_norms();
        const NormProfile p{std::vector<double>(c.data(), c.data() + c.size()), static_cast<std::size_t>(k)};
        if (!is_realizable(p, static_cast<std::size_t>(n), 1e-9)) ++sound_fail;
    }
    o.pass = construct_fail == 0 && sound_fail == 0;
    o.detail = "construct failures " + std::to_string(construct_fail) + " (max diag err " +
               fmt("%.2g", worst_diag) + ", max deviation " + fmt("%.2g", worst_dev) + "), soundness failures " +
               std::to_string(sound_fail);
    return o;
}

Outcome ac5_duality() {
    Outcome o;
    std::mt19937_64 rng(90);
    std::normal_distribution<double> normal;
    double worst = 0;
    for (std::uint64_t t = 0; t < 50; ++t) {
        const std::size_t n = 2 + t % 7;
        const std::size_t k = 1 + (t / 7) % std::min<std::size_t>(n, 4);
        const auto f = project_standard_basis(random_subspace(n, k, derive_seed(91, t)));
        const auto section = polytope_from_frame(f);
        const auto dual = polar(cross_projection(f));
        for (int d = 0; d < 200; ++d) {
            Eigen::VectorXd u(static_cast<Eigen::Index>(k));
            for (auto& x : u) x = normal(rng);
            u.normalize();
            worst = std::max(worst, std::abs(support_function(section, u) - support_function(dual, u)));
        }
    }
    o.pass = worst <= 1e-8;
    o.detail = "10000 directions, max difference " + fmt("%.3g", worst);
    return o;
}

Outcome ac6_solver_oracles() {
    Outcome o;
    std::mt19937_64 rng(100);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst1 = 0;
    for (int t = 0; t < 200; ++t) {
        std::vector<Eigen::VectorXd> pts;
        double m = 0;
        for (int i = 0; i < 1 + t % 10; ++i) {
            Eigen::VectorXd p(1);
            p << u(rng);
            m = std::max(m, std::abs(p(0)));
            pts.push_back(p);
        }
        const auto r = lowner_symmetric(pts);
        worst1 = std::max(worst1, std::abs(1.0 / std::sqrt(r.ellipsoid.matrix()(0, 0)) - m) / m);
    }
    double worst2 = -1;
    for (std::uint64_t t = 0; t < 20; ++t) {
        const std::size_t n = 3 + t % 5;
        const auto f = project_standard_basis(random_subspace(n, 2, derive_seed(101, t)));
        std::vector<Eigen::Vector2d> pts;
        for (std::size_t i = 0; i < n; ++i) pts.emplace_back(f.vector(i));
        const auto r = lowner_symmetric(f);
        const double solver_area = ellipsoid_volume(r.ellipsoid);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.ellipsoid.matrix());
        const auto best = oracle::min_covering_ellipse_grid(pts, 1.0 / std::sqrt(es.eigenvalues()(0)), 1e-3);
        worst2 = std::max(worst2, (solver_area - best.area()) / solver_area);
    }
    o.pass = worst1 <= 1e-12 && worst2 <= 3e-3;
    o.detail = "k=1 max relative error " + fmt("%.2g", worst1) + ", k=2 max oracle improvement " +
               fmt("%.3g", 100 * worst2) + "%";
    return o;
}

Outcome ac7_proved_bound_scan() {
    Outcome o;
    std::ostringstream os;
    std::size_t total_violations = 0;
    for (auto [n, k] : {std::pair<std::size_t, std::size_t>{3, 2}, {4, 3}, {5, 3}}) {
        const auto s = conjecture_scan(n, k, 10'000, 2024 + n * 10 + k);
        total_violations += s.ball2_violations.size();
        os << " (" << n << "," << k << "): max cube " << fmt("%.6f", s.max_cube_ratio) << " <= "
           << fmt("%.6f", s.bound_ball2) << ", min cross " << fmt("%.6f", s.min_cross_ratio) << " vs 2^((k-n)/2) "
           << fmt("%.6f", s.bound_2pow) << (s.counterexample_trial ? " [below]" : "") << ";";
    }
    o.pass = total_violations == 0;
    o.detail = std::to_string(total_violations) + " violations;" + os.str();
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"AC1 equality cases attain all four bounds", ac1_equality_cases},
        {"AC2 Lowner ratio bound and equality characterization", ac2_lowner_bound},
        {"AC3 cube-section and cross-projection volume bounds", ac3_volume_bounds},
        {"AC4 realization completeness and soundness", ac4_realization},
        {"AC5 section and polar projection support functions agree", ac5_duality},
        {"AC6 ellipsoid solver matches oracles", ac6_solver_oracles},
        {"AC7 proved upper bound scan", ac7_proved_bound_scan},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", int(std::size(criteria)) - failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
