#include "jlvol/io.hpp"

#include <fstream>
#include <sstream>

#include "jlvol/errors.hpp"

namespace jlvol::io {

namespace {

// Columns of m as a list of lists.
json columns(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        json col = json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) col.push_back(m(i, j));
        out.push_back(std::move(col));
    }
    return out;
}

json rows(const Eigen::MatrixXd& m) { return columns(m.transpose()); }

// List of `count` lists of length `len`, stored as columns.
Eigen::MatrixXd parse_columns(const json& j, std::size_t count, std::size_t len, const char* what) {
    if (!j.is_array() || j.size() != count) {
        std::ostringstream os;
        os << what << ": expected " << count << " entries";
        throw StructuralError(os.str());
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(len), static_cast<Eigen::Index>(count));
    for (std::size_t c = 0; c < count; ++c) {
        const auto& col = j[c];
        if (!col.is_array() || col.size() != len) {
            std::ostringstream os;
            os << what << ": entry " << c << " must have " << len << " coordinates";
            throw StructuralError(os.str());
        }
        for (std::size_t r = 0; r < len; ++r) {
            if (!col[r].is_number()) throw StructuralError(std::string(what) + ": non-numeric coordinate");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r].get<double>();
        }
    }
    return m;
}

std::size_t get_size(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_unsigned()) {
        throw StructuralError(std::string("missing or invalid '") + key + "'");
    }
    return j.at(key).get<std::size_t>();
}

}  // namespace

json to_json(const FrameSet& f) {
    return {{"n", f.n()}, {"k", f.k()}, {"vectors", columns(f.matrix())}};
}

json to_json(const Subspace& s) {
    return {{"n", s.n()}, {"k", s.k()}, {"basis", rows(s.basis())}};
}

json to_json(const NormProfile& p) {
    return {{"n", p.n()}, {"k", p.k}, {"c", p.entries}};
}

json to_json(const Ellipsoid& e) { return {{"k", e.k()}, {"matrix", rows(e.matrix())}}; }

json to_json(const Polytope& p) {
    json j = {{"k", p.k()}};
    j[p.is_vrep() ? "vrep" : "hrep"] = columns(p.vectors());
    j["multiplicity"] = p.multiplicity();
    return j;
}

json to_json(const ConjectureSummary& s) {
    json j = {{"n", s.n},
              {"k", s.k},
              {"trials", s.trials},
              {"min_cross_ratio", s.min_cross_ratio},
              {"bound_2pow", s.bound_2pow},
              {"max_cube_ratio", s.max_cube_ratio},
              {"bound_ball2", s.bound_ball2},
              {"ball2_violations", s.ball2_violations},
              {"counterexample", nullptr}};
    if (s.counterexample) {
        j["counterexample"] = {{"trial_id", *s.counterexample_trial},
                               {"subspace", to_json(*s.counterexample)}};
    }
    return j;
}

json to_json(const ExperimentReport& r) {
    json j = {{"trial_id", r.trial_id}, {"n", r.n},           {"k", r.k},
              {"seed", r.seed},         {"ratios", r.ratios}, {"bounds", r.bounds},
              {"passes", r.passes},     {"equalities", r.equalities},
              {"profile_uniform", r.profile_uniform}};
    j["volume_product"] = r.volume_product ? json(*r.volume_product) : json(nullptr);
    return j;
}

FrameSet frame_from_json(const json& j) {
    const std::size_t n = get_size(j, "n");
    const std::size_t k = get_size(j, "k");
    if (!j.contains("vectors")) throw StructuralError("frame: missing 'vectors'");
    return FrameSet(parse_columns(j.at("vectors"), n, k, "frame vectors"));
}

Subspace subspace_from_json(const json& j) {
    const std::size_t n = get_size(j, "n");
    const std::size_t k = get_size(j, "k");
    if (!j.contains("basis")) throw StructuralError("subspace: missing 'basis'");
    return Subspace(parse_columns(j.at("basis"), k, n, "subspace basis").transpose());
}

NormProfile profile_from_json(const json& j) {
    const std::size_t n = get_size(j, "n");
    const std::size_t k = get_size(j, "k");
    if (!j.contains("c") || !j.at("c").is_array() || j.at("c").size() != n) {
        throw StructuralError("profile: 'c' must list n entries");
    }
    return NormProfile{j.at("c").get<std::vector<double>>(), k};
}

Ellipsoid ellipsoid_from_json(const json& j) {
    const std::size_t k = get_size(j, "k");
    if (!j.contains("matrix")) throw StructuralError("ellipsoid: missing 'matrix'");
    return Ellipsoid(parse_columns(j.at("matrix"), k, k, "ellipsoid matrix").transpose());
}

Polytope polytope_from_json(const json& j) {
    const std::size_t k = get_size(j, "k");
    auto load = [&](const char* key) {
        const auto& list = j.at(key);
        if (!list.is_array()) throw StructuralError(std::string("polytope: '") + key + "' must be a list");
        return parse_columns(list, list.size(), k, key);
    };
    if (j.contains("vrep")) return Polytope::from_vertices(load("vrep"));
    if (j.contains("hrep")) return Polytope::from_functionals(load("hrep"));
    throw StructuralError("polytope: need 'vrep' or 'hrep'");
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw StructuralError(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw StructuralError("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace jlvol::io
