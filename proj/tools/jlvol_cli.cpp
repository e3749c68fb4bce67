// jlvol: unit decompositions, Löwner/John ellipsoids, and volumes of cube
// sections and cross-polytope projections.
//
// Exit codes: 0 success, 1 proved-bound violation, 2 usage error,
// 3 solver failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "jlvol/ellipsoids.hpp"
#include "jlvol/errors.hpp"
#include "jlvol/experiments.hpp"
#include "jlvol/frames.hpp"
#include "jlvol/io.hpp"
#include "jlvol/majorization.hpp"
#include "jlvol/polytopes.hpp"

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

void print_number(double x) { std::printf("%.17g\n", x); }

void emit_json(const std::string& out, const jlvol::io::json& j) {
    if (out.empty()) std::cout << j.dump(2) << '\n';
    else jlvol::io::write_json_file(out, j);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace jlvol;

    CLI::App app{"jlvol: Löwner/John ellipsoids and volumes of cube sections and cross-polytope projections"};
    app.require_subcommand(1);
    int status = 0;

    // realize
    std::string c_list;
    std::size_t realize_k = 0;
    std::string realize_out;
    auto* realize = app.add_subcommand("realize", "Build a unit decomposition with prescribed squared norms");
    realize->add_option("--c", c_list, "Comma-separated squared norms")->required();
    realize->add_option("--k", realize_k, "Dimension of the decomposition")->required();
    realize->add_option("--out", realize_out, "Output frame JSON (stdout if omitted)");

    // ellipsoid
    auto* ell = app.add_subcommand("ellipsoid", "Löwner/John ellipsoids");
    ell->require_subcommand(1);
    std::string frame_path;
    std::string ell_subspace_path;
    std::string ell_out;
    double eps = kLownerEps;
    auto* lowner = ell->add_subcommand("lowner", "Minimum-volume ellipsoid containing +-v_i");
    lowner->add_option("--frame", frame_path, "Frame JSON")->required();
    lowner->add_option("--eps", eps, "Solver tolerance");
    lowner->add_option("--out", ell_out, "Output ellipsoid JSON");
    auto* john = ell->add_subcommand("john", "Maximal ellipsoid inside the cube section");
    john->add_option("--subspace", ell_subspace_path, "Subspace JSON")->required();
    john->add_option("--eps", eps, "Solver tolerance");
    john->add_option("--out", ell_out, "Output ellipsoid JSON");

    // volume
    auto* vol = app.add_subcommand("volume", "Exact volume of a cube section or cross projection");
    vol->require_subcommand(1);
    std::string vol_subspace_path;
    std::size_t mc_samples = 0;
    std::uint64_t mc_seed = 0;
    auto* cube_cmd = vol->add_subcommand("cube-section", "vol(Q^n cap H)");
    auto* cross_cmd = vol->add_subcommand("cross-projection", "vol(cross-polytope | H)");
    for (auto* sc : {cube_cmd, cross_cmd}) {
        sc->add_option("--subspace", vol_subspace_path, "Subspace JSON")->required();
        sc->add_option("--estimate", mc_samples, "Also print a Monte Carlo estimate with this many samples");
        sc->add_option("--seed", mc_seed, "Monte Carlo seed");
    }

    // equality-case
    std::size_t eq_n = 0;
    std::size_t eq_k = 0;
    std::string eq_out;
    auto* eq = app.add_subcommand("equality-case", "Subspace attaining both volume bounds (k | n)");
    eq->add_option("--n", eq_n)->required();
    eq->add_option("--k", eq_k)->required();
    eq->add_option("--out", eq_out, "Output subspace JSON");

    // verify
    RunSpec vrun;
    std::vector<std::string> experiments;
    bool use_equality = false;
    std::string verify_out;
    std::size_t threads = 0;
    auto* verify = app.add_subcommand("verify", "Check the ellipsoid and volume bounds; CSV output");
    verify->add_option("--n", vrun.n)->required();
    verify->add_option("--k", vrun.k)->required();
    verify->add_option("--trials", vrun.trials)->default_val(1);
    verify->add_option("--seed", vrun.seed)->default_val(0);
    verify->add_option("--experiments", experiments, "ellipsoid,volume")->delimiter(',');
    verify->add_flag("--equality", use_equality, "Use the equality subspace instead of random ones");
    verify->add_option("--eps", eps, "Solver tolerance");
    verify->add_option("--threads", threads, "Worker threads (0 = all cores)");
    verify->add_option("--out", verify_out, "CSV path (stdout if omitted)");

    // conjecture-scan
    std::size_t scan_n = 0;
    std::size_t scan_k = 0;
    std::size_t scan_trials = 1000;
    std::uint64_t scan_seed = 0;
    auto* scan = app.add_subcommand("conjecture-scan", "Scan random subspaces against 2^{+-(n-k)/2}");
    scan->add_option("--n", scan_n)->required();
    scan->add_option("--k", scan_k)->required();
    scan->add_option("--trials", scan_trials);
    scan->add_option("--seed", scan_seed);

    // suite
    std::string config_path;
    std::string suite_out;
    auto* suite = app.add_subcommand("suite", "Run a JSON-configured batch of verifications");
    suite->add_option("--config", config_path, "Config JSON")->required();
    suite->add_option("--out", suite_out, "CSV path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    auto write_suite = [&](const SuiteConfig& cfg, const std::string& out) {
        const auto result = run_suite(cfg);
        if (out.empty()) {
            write_csv(std::cout, result.reports);
        } else {
            std::ofstream f(out);
            if (!f) throw StructuralError("cannot write " + out);
            write_csv(f, result.reports);
        }
        return result.proved_bound_violation ? kExitViolation : 0;
    };

    try {
        if (*realize) {
            std::vector<double> c;
            std::stringstream ss(c_list);
            for (std::string tok; std::getline(ss, tok, ',');) c.push_back(std::stod(tok));
            const NormProfile profile{c, realize_k};
            emit_json(realize_out, io::to_json(construct_realization(profile, c.size())));
        } else if (*lowner) {
            const auto frame = io::frame_from_json(io::read_json_file(frame_path));
            const auto res = lowner_symmetric(frame, eps);
            if (!ell_out.empty()) io::write_json_file(ell_out, io::to_json(res.ellipsoid));
            print_number(volume_ratio(res.ellipsoid));
        } else if (*john) {
            const auto sub = io::subspace_from_json(io::read_json_file(ell_subspace_path));
            const auto e = john_of_cube_section(sub, eps);
            if (!ell_out.empty()) io::write_json_file(ell_out, io::to_json(e));
            print_number(volume_ratio(e));
        } else if (*vol) {
            const auto sub = io::subspace_from_json(io::read_json_file(vol_subspace_path));
            const auto frame = project_standard_basis(sub);
            const bool cube = static_cast<bool>(*cube_cmd);
            const Polytope body = cube ? polytope_from_frame(frame) : cross_projection(frame);
            const double v = volume(body);
            const double ref = cube ? cube_volume(sub.k()) : cross_polytope_volume(sub.k());
            std::printf("volume %.17g\nratio %.17g\n", v, v / ref);
            if (mc_samples > 0) {
                const auto est = estimate_volume(body, mc_samples, mc_seed);
                std::printf("estimate %.17g\nstandard_error %.17g\n", est.estimate, est.standard_error);
            }
        } else if (*eq) {
            emit_json(eq_out, io::to_json(equality_subspace(eq_n, eq_k)));
        } else if (*verify) {
            vrun.kind = use_equality ? SubspaceKind::Equality : SubspaceKind::Random;
            if (!experiments.empty()) {
                vrun.ellipsoid = vrun.volume = false;
                for (const auto& e : experiments) {
                    if (e == "ellipsoid") vrun.ellipsoid = true;
                    else if (e == "volume") vrun.volume = true;
                    else throw StructuralError("unknown experiment '" + e + "'");
                }
            }
            SuiteConfig cfg;
            cfg.runs.push_back(vrun);
            cfg.eps = eps;
            cfg.threads = threads;
            status = write_suite(cfg, verify_out);
        } else if (*scan) {
            const auto s = conjecture_scan(scan_n, scan_k, scan_trials, scan_seed);
            std::cout << io::to_json(s).dump(2) << '\n';
            if (!s.ball2_violations.empty()) status = kExitViolation;
        } else if (*suite) {
            std::ifstream in(config_path);
            if (!in) throw StructuralError("cannot open " + config_path);
            std::stringstream buf;
            buf << in.rdbuf();
            status = write_suite(parse_suite_config(buf.str()), suite_out);
        }
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const DegenerateBodyError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: bad number: " << e.what() << '\n';
        return kExitUsage;
    }
    return status;
}
