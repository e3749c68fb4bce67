#include <cmath>
#include <sstream>

#include "doctest.h"
#include "jlvol/errors.hpp"
#include "jlvol/experiments.hpp"
#include "jlvol/polytopes.hpp"
#include "jlvol/rng.hpp"

using namespace jlvol;

TEST_CASE("random_subspace") {
    const auto full = random_subspace(4, 4, 3);
    CHECK(full.orthonormality_defect() <= 1e-12);
    CHECK(random_subspace(6, 2, 42).basis() == random_subspace(6, 2, 42).basis());
    CHECK(random_subspace(6, 2, 42).basis() != random_subspace(6, 2, 43).basis());

    double mean = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const auto sub = random_subspace(4, 2, s);
        CHECK(sub.orthonormality_defect() <= 1e-12);
        mean += project_standard_basis(sub).squared_norms()(0);
    }
    mean /= 1000;
    CHECK(std::abs(mean - 0.5) <= 0.02);

    CHECK_THROWS_AS(random_subspace(2, 3, 0), StructuralError);
    CHECK_THROWS_AS(random_subspace(2, 0, 0), StructuralError);
}

TEST_CASE("verify_ellipsoid_bounds") {
    SUBCASE("equality n=4, k=2") {
        const auto r = verify_ellipsoid_bounds(equality_subspace(4, 2));
        CHECK(r.ratios.at(kLownerRatio) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(r.ratios.at(kJohnRatio) == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(r.bounds.at(kLownerRatio) == doctest::Approx(0.5));
        CHECK(r.bounds.at(kJohnRatio) == doctest::Approx(2.0));
        CHECK(r.equalities.at(kLownerRatio));
        CHECK(r.equalities.at(kJohnRatio));
        CHECK(r.profile_uniform);
        CHECK(r.all_pass());
    }
    SUBCASE("coordinate subspace") {
        const auto r = verify_ellipsoid_bounds(Subspace::coordinate(5, 2));
        CHECK(r.ratios.at(kLownerRatio) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(r.ratios.at(kJohnRatio) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK_FALSE(r.equalities.at(kLownerRatio));
        CHECK_FALSE(r.profile_uniform);
        CHECK(r.all_pass());
    }
}

TEST_CASE("verify_volume_bounds") {
    SUBCASE("equality n=6, k=3") {
        const auto r = verify_volume_bounds(equality_subspace(6, 3));
        const double p = std::pow(2.0, 1.5);
        CHECK(r.ratios.at(kCubeRatio) == doctest::Approx(p).epsilon(1e-9));
        CHECK(r.ratios.at(kCrossRatio) == doctest::Approx(1 / p).epsilon(1e-9));
        CHECK(r.ratios.at(kLownerRatio) == doctest::Approx(1 / p).epsilon(1e-9));
        CHECK(r.ratios.at(kJohnRatio) == doctest::Approx(p).epsilon(1e-9));
        for (const auto& key : {kLownerRatio, kJohnRatio, kCubeRatio, kCrossRatio}) CHECK(r.equalities.at(key));
        CHECK(r.all_pass());
        REQUIRE(r.volume_product.has_value());
        CHECK(*r.volume_product == doctest::Approx(64.0 / 6.0).epsilon(1e-9));
    }
    SUBCASE("equality n=4, k=2") {
        const auto r = verify_volume_bounds(equality_subspace(4, 2));
        CHECK(r.ratios.at(kCubeRatio) == doctest::Approx(2.0));
        CHECK(r.ratios.at(kCrossRatio) == doctest::Approx(0.5));
    }
    SUBCASE("coordinate subspace is not an equality case") {
        const auto r = verify_volume_bounds(Subspace::coordinate(4, 2));
        CHECK(r.ratios.at(kCubeRatio) == doctest::Approx(1.0));
        CHECK(r.ratios.at(kCrossRatio) == doctest::Approx(1.0));
        CHECK_FALSE(r.equalities.at(kCubeRatio));
        CHECK(r.all_pass());
    }
    SUBCASE("random n=5, k=2 has no equality flags") {
        for (std::uint64_t s = 0; s < 20; ++s) {
            const auto r = verify_volume_bounds(random_subspace(5, 2, s));
            CHECK(r.all_pass());
            CHECK_FALSE(r.profile_uniform);
            for (const auto& [key, eq] : r.equalities) CHECK_FALSE(eq);
        }
    }
}

TEST_CASE("conjecture_scan") {
    SUBCASE("n = k") {
        const auto s = conjecture_scan(3, 3, 20, 1);
        CHECK(s.min_cross_ratio == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(s.max_cube_ratio == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(s.ball2_violations.empty());
        CHECK_FALSE(s.counterexample_trial.has_value());
    }
    SUBCASE("n=2, k=1 family") {
        // Lines at angle theta: cross ratio max(|cos|, |sin|), minimum 2^{-1/2}.
        double min_ratio = 1;
        for (int t = 0; t <= 1000; ++t) {
            const double theta = std::numbers::pi / 2 * t / 1000;
            Eigen::MatrixXd b(1, 2);
            b << std::cos(theta), std::sin(theta);
            const auto f = project_standard_basis(Subspace(b));
            min_ratio = std::min(min_ratio, volume(cross_projection(f)) / cross_polytope_volume(1));
        }
        CHECK(min_ratio == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
        const auto s = conjecture_scan(2, 1, 500, 5);
        CHECK(s.bound_2pow == doctest::Approx(std::sqrt(0.5)));
        CHECK(s.bound_ball2 == doctest::Approx(std::sqrt(2.0)));
        CHECK(s.min_cross_ratio >= std::sqrt(0.5) - 1e-12);
        CHECK(s.min_cross_ratio <= std::sqrt(0.5) + 0.01);
        CHECK(s.ball2_violations.empty());
    }
    SUBCASE("small n=4, k=3 run") {
        const auto s = conjecture_scan(4, 3, 300, 9);
        CHECK(s.trials == 300);
        CHECK(s.max_cube_ratio <= s.bound_ball2 + 1e-9);
        CHECK(s.min_cross_ratio >= bound_kn(4, 3) - 1e-9);
        CHECK(s.ball2_violations.empty());
        CHECK(s.min_cross_ratio >= s.bound_2pow - 1e-9);
    }
}

TEST_CASE("run_suite") {
    SUBCASE("equality runs") {
        SuiteConfig cfg;
        for (auto [n, k] : {std::pair<std::size_t, std::size_t>{2, 1}, {4, 2}, {6, 2}, {6, 3}, {8, 4}}) {
            cfg.runs.push_back({n, k, 1, 0, SubspaceKind::Equality, true, true});
        }
        const auto res = run_suite(cfg);
        CHECK_FALSE(res.proved_bound_violation);
        REQUIRE(res.reports.size() == 5);
        for (const auto& r : res.reports) {
            for (const auto& [key, eq] : r.equalities) CHECK_MESSAGE(eq, key << " n=" << r.n << " k=" << r.k);
            CHECK(r.all_pass());
        }
    }
    SUBCASE("empty config") {
        const auto res = run_suite(SuiteConfig{});
        CHECK(res.reports.empty());
        CHECK_FALSE(res.proved_bound_violation);
    }
    SUBCASE("many random trials, deterministic CSV") {
        SuiteConfig cfg;
        cfg.runs.push_back({3, 2, 100, 77, SubspaceKind::Random, true, true});
        cfg.runs.push_back({5, 3, 20, 78, SubspaceKind::Random, true, true});
        cfg.threads = 4;
        const auto a = run_suite(cfg);
        cfg.threads = 1;
        const auto b = run_suite(cfg);
        CHECK_FALSE(a.proved_bound_violation);
        REQUIRE(a.reports.size() == 120);
        std::ostringstream csv_a, csv_b;
        write_csv(csv_a, a.reports);
        write_csv(csv_b, b.reports);
        CHECK(csv_a.str() == csv_b.str());
        CHECK(csv_a.str().find(tolerance_header()) == 0);

        for (std::size_t i = 1; i < a.reports.size(); ++i) {
            const auto& p = a.reports[i - 1];
            const auto& q = a.reports[i];
            CHECK(std::tie(p.n, p.k, p.trial_id) < std::tie(q.n, q.k, q.trial_id));
        }
        for (const auto& r : a.reports) {
            CHECK(r.seed == derive_seed(r.n == 3 ? 77 : 78, r.trial_id));
            // Duality between the two ellipsoid ratios.
            CHECK(r.ratios.at(kLownerRatio) * r.ratios.at(kJohnRatio) == doctest::Approx(1.0).epsilon(1e-9));
            // Sandwich.
            CHECK(r.ratios.at(kCubeRatio) <= r.ratios.at(kJohnRatio) * (1 + kSandwichTol));
            CHECK(r.ratios.at(kCrossRatio) >= r.ratios.at(kLownerRatio) * (1 - kSandwichTol));
            // Equality flags only for uniform profiles.
            for (const auto& [key, eq] : r.equalities) {
                if (eq) CHECK(r.profile_uniform);
            }
            CHECK(r.all_pass());
        }
    }
    SUBCASE("ellipsoid-only runs leave volume fields empty") {
        SuiteConfig cfg;
        cfg.runs.push_back({9, 7, 3, 1, SubspaceKind::Random, true, false});
        const auto res = run_suite(cfg);
        REQUIRE(res.reports.size() == 3);
        CHECK(res.reports[0].ratios.count(kCubeRatio) == 0);
        std::ostringstream csv;
        write_csv(csv, res.reports);
        CHECK(csv.str().find(",,") != std::string::npos);
    }
    SUBCASE("invalid configs") {
        SuiteConfig big;
        big.runs.push_back({7, 6, 1, 0, SubspaceKind::Random, true, true});
        CHECK_THROWS_AS(run_suite(big), StructuralError);
        SuiteConfig many;
        many.runs.push_back({15, 2, 1, 0, SubspaceKind::Random, false, true});
        CHECK_THROWS_AS(validate(many), StructuralError);
        SuiteConfig eq;
        eq.runs.push_back({5, 2, 1, 0, SubspaceKind::Equality, true, false});
        CHECK_THROWS_AS(validate(eq), StructuralError);
        SuiteConfig eps;
        eps.eps = 0;
        CHECK_THROWS_AS(validate(eps), StructuralError);
        SuiteConfig bad_k;
        bad_k.runs.push_back({3, 4, 1, 0, SubspaceKind::Random, true, false});
        CHECK_THROWS_AS(validate(bad_k), StructuralError);
    }
}

TEST_CASE("parse_suite_config") {
    const auto cfg = parse_suite_config(R"({
        "eps": 1e-8, "threads": 2,
        "runs": [
            {"n": 4, "k": 2, "trials": 3, "seed": 5, "subspace": "equality", "experiments": ["volume"]},
            {"n": 6, "k": 3, "trials": 10, "seed": 1}
        ]})");
    CHECK(cfg.eps == 1e-8);
    CHECK(cfg.threads == 2);
    REQUIRE(cfg.runs.size() == 2);
    CHECK(cfg.runs[0].kind == SubspaceKind::Equality);
    CHECK_FALSE(cfg.runs[0].ellipsoid);
    CHECK(cfg.runs[0].volume);
    CHECK(cfg.runs[1].kind == SubspaceKind::Random);
    CHECK(cfg.runs[1].ellipsoid);

    CHECK_THROWS_AS(parse_suite_config("{"), StructuralError);
    CHECK_THROWS_AS(parse_suite_config(R"({"runs": [{"n": 4}]})"), StructuralError);
    CHECK_THROWS_AS(parse_suite_config(R"({"runs": [{"n": 4, "k": 2, "trials": 1, "seed": 0,
        "subspace": "weird"}]})"),
                    StructuralError);
}

TEST_CASE("bounds") {
    CHECK(bound_kn(4, 2) == doctest::Approx(0.5));
    CHECK(bound_nk(4, 2) == doctest::Approx(2.0));
    CHECK(bound_nk(6, 3) == doctest::Approx(std::pow(2.0, 1.5)));
    CHECK(bound_kn(5, 5) == 1.0);
}
