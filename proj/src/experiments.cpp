#include "jlvol/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <tuple>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "jlvol/errors.hpp"
#include "jlvol/polytopes.hpp"
#include "jlvol/rng.hpp"

namespace jlvol {

namespace {

bool rel_equal(double value, double target) {
    return std::abs(value - target) <= kEqualityRelTol * std::abs(target);
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void fill_ellipsoid(ExperimentReport& r, const FrameSet& frame, double eps) {
    const auto lw = lowner_symmetric(frame, eps);
    const double lowner = volume_ratio(lw.ellipsoid);
    const double john = volume_ratio(polar_ellipsoid(lw.ellipsoid));
    const double bkn = bound_kn(r.n, r.k);
    const double bnk = bound_nk(r.n, r.k);
    r.ratios[kLownerRatio] = lowner;
    r.ratios[kJohnRatio] = john;
    r.bounds[kLownerRatio] = bkn;
    r.bounds[kJohnRatio] = bnk;
    r.passes[kLownerRatio] = lowner >= bkn - kEllipsoidBoundTol;
    r.passes[kJohnRatio] = john <= bnk + kEllipsoidBoundTol;
    r.equalities[kLownerRatio] = rel_equal(lowner, bkn);
    r.equalities[kJohnRatio] = rel_equal(john, bnk);
}

void fill_profile(ExperimentReport& r, const FrameSet& frame) {
    const double target = static_cast<double>(r.k) / static_cast<double>(r.n);
    const Eigen::VectorXd c = frame.squared_norms();
    r.profile_uniform = ((c.array() - target).abs() <= kProfileTol).all();
}

void fill_volume(ExperimentReport& r, const FrameSet& frame) {
    const double cube = volume(polytope_from_frame(frame));
    const double cross = volume(cross_projection(frame));
    const double cube_ratio = cube / cube_volume(r.k);
    const double cross_ratio = cross / cross_polytope_volume(r.k);
    const double bkn = bound_kn(r.n, r.k);
    const double bnk = bound_nk(r.n, r.k);
    r.ratios[kCubeRatio] = cube_ratio;
    r.ratios[kCrossRatio] = cross_ratio;
    r.bounds[kCubeRatio] = bnk;
    r.bounds[kCrossRatio] = bkn;
    bool cube_ok = cube_ratio <= bnk + kVolumeBoundTol;
    bool cross_ok = cross_ratio >= bkn - kVolumeBoundTol;
    if (auto it = r.ratios.find(kJohnRatio); it != r.ratios.end()) {
        cube_ok = cube_ok && cube_ratio <= it->second + kSandwichTol;
    }
    if (auto it = r.ratios.find(kLownerRatio); it != r.ratios.end()) {
        cross_ok = cross_ok && cross_ratio >= it->second - kSandwichTol;
    }
    r.passes[kCubeRatio] = cube_ok;
    r.passes[kCrossRatio] = cross_ok;
    r.equalities[kCubeRatio] = rel_equal(cube_ratio, bnk);
    r.equalities[kCrossRatio] = rel_equal(cross_ratio, bkn);
    r.volume_product = cube * cross;
}

ExperimentReport blank_report(const Subspace& s) {
    ExperimentReport r;
    r.n = s.n();
    r.k = s.k();
    return r;
}

std::size_t worker_count(std::size_t requested, std::size_t jobs) {
    std::size_t w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(w, jobs));
}

}  // namespace

double bound_kn(std::size_t n, std::size_t k) {
    const double kd = static_cast<double>(k);
    return std::pow(kd / static_cast<double>(n), kd / 2.0);
}

double bound_nk(std::size_t n, std::size_t k) {
    const double kd = static_cast<double>(k);
    return std::pow(static_cast<double>(n) / kd, kd / 2.0);
}

bool ExperimentReport::all_pass() const {
    return std::all_of(passes.begin(), passes.end(), [](const auto& kv) { return kv.second; });
}

Subspace random_subspace(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 1 || k > n) throw StructuralError("random subspace: need 1 <= k <= n");
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto kk = static_cast<Eigen::Index>(k);
    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd b(kk, nn);
    for (;;) {
        for (Eigen::Index i = 0; i < kk; ++i) {
            for (Eigen::Index j = 0; j < nn; ++j) b(i, j) = normal(rng);
        }
        bool ok = true;
        for (Eigen::Index i = 0; i < kk && ok; ++i) {
            Eigen::VectorXd row = b.row(i).transpose();
            const double before = row.norm();
            for (int pass = 0; pass < 2; ++pass) {
                row -= b.topRows(i).transpose() * (b.topRows(i) * row);
            }
            const double after = row.norm();
            if (!(after > 1e-8 * before)) ok = false;
            else b.row(i) = (row / after).transpose();
        }
        if (ok) return Subspace(b);
    }
}

ExperimentReport verify_ellipsoid_bounds(const Subspace& subspace, double eps) {
    ExperimentReport r = blank_report(subspace);
    const FrameSet frame = project_standard_basis(subspace);
    fill_profile(r, frame);
    fill_ellipsoid(r, frame, eps);
    return r;
}

ExperimentReport verify_volume_bounds(const Subspace& subspace, double eps) {
    ExperimentReport r = blank_report(subspace);
    const FrameSet frame = project_standard_basis(subspace);
    fill_profile(r, frame);
    fill_ellipsoid(r, frame, eps);
    fill_volume(r, frame);
    return r;
}

ConjectureSummary conjecture_scan(std::size_t n, std::size_t k, std::size_t trials,
                                  std::uint64_t seed) {
    if (k < 1 || k > n) throw StructuralError("conjecture scan: need 1 <= k <= n");
    ConjectureSummary s;
    s.n = n;
    s.k = k;
    s.trials = trials;
    const double kn = static_cast<double>(k) - static_cast<double>(n);
    s.bound_2pow = std::pow(2.0, kn / 2.0);
    s.bound_ball2 = std::pow(2.0, -kn / 2.0);
    s.min_cross_ratio = std::numeric_limits<double>::infinity();
    s.max_cube_ratio = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const Subspace sub = random_subspace(n, k, derive_seed(seed, t));
        const FrameSet frame = project_standard_basis(sub);
        const double cube = volume(polytope_from_frame(frame)) / cube_volume(k);
        const double cross = volume(cross_projection(frame)) / cross_polytope_volume(k);
        s.max_cube_ratio = std::max(s.max_cube_ratio, cube);
        s.min_cross_ratio = std::min(s.min_cross_ratio, cross);
        if (cube > s.bound_ball2 + kVolumeBoundTol) s.ball2_violations.push_back(t);
        if (cross < s.bound_2pow - kVolumeBoundTol && !s.counterexample_trial) {
            s.counterexample_trial = t;
            s.counterexample = sub;
        }
    }
    return s;
}

void validate(const SuiteConfig& config) {
    for (const auto& run : config.runs) {
        if (run.k < 1 || run.k > run.n) throw StructuralError("suite: need 1 <= k <= n");
        if (run.volume && (run.k > kExactMaxDim || run.n > kExactMaxGenerators)) {
            std::ostringstream os;
            os << "suite: volume experiment needs k <= " << kExactMaxDim << " and n <= "
               << kExactMaxGenerators;
            throw StructuralError(os.str());
        }
        if (run.kind == SubspaceKind::Equality && run.n % run.k != 0) {
            throw StructuralError("suite: equality subspace needs k | n");
        }
    }
    if (!(config.eps > 0.0)) throw StructuralError("suite: eps must be positive");
}

SuiteResult run_suite(const SuiteConfig& config) {
    validate(config);
    struct Job {
        const RunSpec* run;
        std::uint64_t trial;
    };
    std::vector<Job> jobs;
    for (const auto& run : config.runs) {
        for (std::size_t t = 0; t < run.trials; ++t) jobs.push_back({&run, t});
    }

    std::vector<ExperimentReport> reports(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                const RunSpec& run = *jobs[i].run;
                const std::uint64_t trial_seed = derive_seed(run.seed, jobs[i].trial);
                const Subspace sub = run.kind == SubspaceKind::Equality
                                         ? equality_subspace(run.n, run.k)
                                         : random_subspace(run.n, run.k, trial_seed);
                ExperimentReport r = blank_report(sub);
                const FrameSet frame = project_standard_basis(sub);
                fill_profile(r, frame);
                if (run.ellipsoid) fill_ellipsoid(r, frame, config.eps);
                if (run.volume) fill_volume(r, frame);
                r.trial_id = jobs[i].trial;
                r.seed = trial_seed;
                reports[i] = std::move(r);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const std::size_t workers = worker_count(config.threads, jobs.size());
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::stable_sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
        return std::tie(a.n, a.k, a.trial_id) < std::tie(b.n, b.k, b.trial_id);
    });
    SuiteResult out;
    out.proved_bound_violation =
        std::any_of(reports.begin(), reports.end(), [](const auto& r) { return !r.all_pass(); });
    out.reports = std::move(reports);
    return out;
}

SuiteConfig parse_suite_config(const std::string& json_text) {
    SuiteConfig cfg;
    try {
        const auto j = nlohmann::json::parse(json_text);
        cfg.eps = j.value("eps", kLownerEps);
        cfg.threads = j.value("threads", std::size_t{0});
        for (const auto& r : j.at("runs")) {
            RunSpec run;
            run.n = r.at("n").get<std::size_t>();
            run.k = r.at("k").get<std::size_t>();
            run.trials = r.value("trials", std::size_t{1});
            run.seed = r.value("seed", std::uint64_t{0});
            const std::string kind = r.value("subspace", std::string("random"));
            if (kind == "random") run.kind = SubspaceKind::Random;
            else if (kind == "equality") run.kind = SubspaceKind::Equality;
            else throw StructuralError("suite: unknown subspace kind '" + kind + "'");
            if (r.contains("experiments")) {
                run.ellipsoid = run.volume = false;
                for (const auto& e : r.at("experiments")) {
                    const auto name = e.get<std::string>();
                    if (name == "ellipsoid") run.ellipsoid = true;
                    else if (name == "volume") run.volume = true;
                    else throw StructuralError("suite: unknown experiment '" + name + "'");
                }
            }
            cfg.runs.push_back(run);
        }
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("suite: bad config: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

std::string tolerance_header() {
    std::ostringstream os;
    os << "# tolerances: ellipsoid_bound=" << kEllipsoidBoundTol
       << " volume_bound=" << kVolumeBoundTol << " sandwich=" << kSandwichTol
       << " equality_rel=" << kEqualityRelTol << " profile=" << kProfileTol
       << " lowner_eps=" << kLownerEps << " orth=" << kOrthTol << " cert=" << kCertTol
       << " geo=" << kGeoTol;
    return os.str();
}

void write_csv(std::ostream& out, const std::vector<ExperimentReport>& reports) {
    out << tolerance_header() << '\n';
    out << "n,k,trial_id,seed,lowner_ratio,john_ratio,cube_section_ratio,cross_projection_ratio,"
           "bound_kn,bound_nk,pass_lowner,pass_john,pass_cube,pass_cross,equality_flags,"
           "profile_uniform\n";
    const std::string keys[] = {kLownerRatio, kJohnRatio, kCubeRatio, kCrossRatio};
    for (const auto& r : reports) {
        out << r.n << ',' << r.k << ',' << r.trial_id << ',' << r.seed;
        for (const auto& key : keys) {
            out << ',';
            if (auto it = r.ratios.find(key); it != r.ratios.end()) out << fmt(it->second);
        }
        out << ',' << fmt(bound_kn(r.n, r.k)) << ',' << fmt(bound_nk(r.n, r.k));
        for (const auto& key : keys) {
            out << ',';
            if (auto it = r.passes.find(key); it != r.passes.end()) out << (it->second ? 1 : 0);
        }
        std::string flags;
        for (const auto& key : keys) {
            if (auto it = r.equalities.find(key); it != r.equalities.end() && it->second) {
                if (!flags.empty()) flags += ';';
                flags += key.substr(0, key.find('_'));
            }
        }
        out << ',' << (flags.empty() ? "none" : flags) << ',' << (r.profile_uniform ? 1 : 0)
            << '\n';
    }
}

}  // namespace jlvol
