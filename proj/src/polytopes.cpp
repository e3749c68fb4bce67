#include "jlvol/polytopes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "jlvol/ellipsoids.hpp"
#include "jlvol/errors.hpp"
#include "jlvol/linprog.hpp"
#include "jlvol/rng.hpp"

namespace jlvol {

namespace {

using Face = std::vector<int>;

Eigen::Index numeric_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-9) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > rel_tol * sv(0)) ++r;
    }
    return r;
}

bool same_up_to_sign(const Eigen::VectorXd& x, const Eigen::VectorXd& r, double tol) {
    const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
    return (x - r).cwiseAbs().maxCoeff() <= tol * scale ||
           (x + r).cwiseAbs().maxCoeff() <= tol * scale;
}

struct Collapsed {
    Eigen::MatrixXd reps;
    std::vector<int> multiplicity;
};

// One representative per +- class, zero columns dropped.
Collapsed collapse_pm(const Eigen::MatrixXd& vecs, double tol) {
    double scale = 0.0;
    for (Eigen::Index j = 0; j < vecs.cols(); ++j) scale = std::max(scale, vecs.col(j).norm());
    std::vector<Eigen::VectorXd> reps;
    std::vector<int> mult;
    for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
        const Eigen::VectorXd x = vecs.col(j);
        if (x.norm() <= tol * scale || scale == 0.0) continue;
        bool found = false;
        for (std::size_t r = 0; r < reps.size(); ++r) {
            if (same_up_to_sign(x, reps[r], tol)) {
                ++mult[r];
                found = true;
                break;
            }
        }
        if (!found) {
            reps.push_back(x);
            mult.push_back(1);
        }
    }
    Collapsed out;
    out.reps.resize(vecs.rows(), static_cast<Eigen::Index>(reps.size()));
    for (std::size_t r = 0; r < reps.size(); ++r) out.reps.col(static_cast<Eigen::Index>(r)) = reps[r];
    out.multiplicity = std::move(mult);
    return out;
}

bool next_combination(std::vector<Eigen::Index>& idx, Eigen::Index m) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    for (Eigen::Index i = k - 1; i >= 0; --i) {
        if (idx[static_cast<std::size_t>(i)] < m - k + i) {
            ++idx[static_cast<std::size_t>(i)];
            for (Eigen::Index j = i + 1; j < k; ++j) {
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
            }
            return true;
        }
    }
    return false;
}

// Vertices (one per +- pair) of {y : |<g_i, y>| <= 1}; functionals must
// span R^k.
Eigen::MatrixXd hrep_vertices(const Eigen::MatrixXd& g) {
    const Eigen::Index k = g.rows();
    const Eigen::Index m = g.cols();
    if (numeric_rank(g) < k) {
        throw DegenerateBodyError("polytope: functionals do not span, body is unbounded");
    }
    // Sign patterns with the first sign fixed to +1; the rest are negations.
    const Eigen::Index patterns = Eigen::Index{1} << (k - 1);
    Eigen::MatrixXd rhs(k, patterns);
    for (Eigen::Index s = 0; s < patterns; ++s) {
        rhs(0, s) = 1.0;
        for (Eigen::Index i = 1; i < k; ++i) rhs(i, s) = ((s >> (i - 1)) & 1) ? -1.0 : 1.0;
    }

    std::vector<Eigen::VectorXd> verts;
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    const Eigen::MatrixXd gt = g.transpose();
    do {
        Eigen::MatrixXd sub(k, k);
        for (Eigen::Index r = 0; r < k; ++r) sub.row(r) = gt.row(idx[static_cast<std::size_t>(r)]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
        lu.setThreshold(1e-12);
        if (!lu.isInvertible()) continue;
        const Eigen::MatrixXd ys = lu.solve(rhs);
        for (Eigen::Index s = 0; s < patterns; ++s) {
            const Eigen::VectorXd y = ys.col(s);
            if ((gt * y).cwiseAbs().maxCoeff() > 1.0 + kGeoTol) continue;
            bool dup = false;
            for (const auto& v : verts) {
                if (same_up_to_sign(y, v, kGeoTol)) {
                    dup = true;
                    break;
                }
            }
            if (!dup) verts.push_back(y);
        }
    } while (next_combination(idx, m));

    Eigen::MatrixXd out(k, static_cast<Eigen::Index>(verts.size()));
    for (std::size_t i = 0; i < verts.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = verts[i];
    return out;
}

// Affine dimension of a set of points given by index.
Eigen::Index affine_dim(const std::vector<Eigen::VectorXd>& pts, const Face& f) {
    if (f.size() <= 1) return 0;
    const Eigen::Index k = pts.front().size();
    Eigen::MatrixXd d(k, static_cast<Eigen::Index>(f.size() - 1));
    double scale = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) {
        d.col(static_cast<Eigen::Index>(i - 1)) = pts[static_cast<std::size_t>(f[i])] - pts[static_cast<std::size_t>(f[0])];
        scale = std::max(scale, pts[static_cast<std::size_t>(f[i])].norm());
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
    const auto& sv = svd.singularValues();
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > kGeoTol * std::max(scale, 1e-300)) ++r;
    }
    return r;
}

// Pulling triangulation of the boundary, driven by the vertex-facet
// incidence of the whole polytope. Each face's apex is its lowest-index
// vertex, so the result is deterministic.
class BoundaryTriangulator {
public:
    BoundaryTriangulator(const std::vector<Eigen::VectorXd>& verts, const std::vector<Face>& facets)
        : verts_(verts), facets_(facets) {}

    const std::vector<Face>& simplices(const Face& f, Eigen::Index dim) {
        auto it = memo_.find(f);
        if (it != memo_.end()) return it->second;
        std::vector<Face> out;
        if (dim == 0) {
            out.push_back({f.front()});
        } else {
            const int apex = f.front();
            std::vector<Face> subfaces;
            for (const auto& facet : facets_) {
                Face meet;
                std::set_intersection(f.begin(), f.end(), facet.begin(), facet.end(),
                                      std::back_inserter(meet));
                if (meet.size() < static_cast<std::size_t>(dim) || meet.size() == f.size()) continue;
                if (std::binary_search(meet.begin(), meet.end(), apex)) continue;
                if (std::find(subfaces.begin(), subfaces.end(), meet) != subfaces.end()) continue;
                if (affine_dim(verts_, meet) != dim - 1) continue;
                subfaces.push_back(std::move(meet));
            }
            for (const auto& sub : subfaces) {
                for (const auto& s : simplices(sub, dim - 1)) {
                    Face t = s;
                    t.push_back(apex);
                    out.push_back(std::move(t));
                }
            }
        }
        return memo_.emplace(f, std::move(out)).first->second;
    }

private:
    const std::vector<Eigen::VectorXd>& verts_;
    const std::vector<Face>& facets_;
    std::map<Face, std::vector<Face>> memo_;
};

std::vector<Eigen::VectorXd> symmetric_closure(const Eigen::MatrixXd& reps) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(2 * reps.cols()));
    for (Eigen::Index j = 0; j < reps.cols(); ++j) {
        out.emplace_back(reps.col(j));
        out.emplace_back(-reps.col(j));
    }
    return out;
}

Eigen::MatrixXd vertex_reps(const Polytope& p) {
    return p.is_vrep() ? p.vectors() : hrep_vertices(p.vectors());
}

}  // namespace

Polytope Polytope::from_vertices(const Eigen::MatrixXd& points) {
    if (points.rows() < 1) throw StructuralError("polytope: zero-dimensional points");
    if (!points.allFinite()) throw StructuralError("polytope: non-finite coordinate");
    auto c = collapse_pm(points, kGeoTol);
    const Eigen::Index k = points.rows();
    if (c.reps.cols() == 0) throw DegenerateBodyError("polytope: all points are zero");
    if (numeric_rank(c.reps) < k) {
        throw DegenerateBodyError("polytope: points do not span, origin is not interior");
    }
    // Facet normals of conv{+-c_j} are the vertices of its polar. A point is
    // extreme iff the normals of the facets through it span R^k.
    const Eigen::MatrixXd normals = hrep_vertices(c.reps);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < c.reps.cols(); ++j) {
        const Eigen::VectorXd x = c.reps.col(j);
        std::vector<Eigen::Index> active;
        for (Eigen::Index a = 0; a < normals.cols(); ++a) {
            if (std::abs(normals.col(a).dot(x)) >= 1.0 - kGeoTol) active.push_back(a);
        }
        if (static_cast<Eigen::Index>(active.size()) < k) continue;
        Eigen::MatrixXd act(k, static_cast<Eigen::Index>(active.size()));
        for (std::size_t a = 0; a < active.size(); ++a) act.col(static_cast<Eigen::Index>(a)) = normals.col(active[a]);
        if (numeric_rank(act) == k) keep.push_back(j);
    }
    Eigen::MatrixXd reps(k, static_cast<Eigen::Index>(keep.size()));
    std::vector<int> mult;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        reps.col(static_cast<Eigen::Index>(i)) = c.reps.col(keep[i]);
        mult.push_back(c.multiplicity[static_cast<std::size_t>(keep[i])]);
    }
    return Polytope(Rep::Vertices, std::move(reps), std::move(mult));
}

Polytope Polytope::from_functionals(const Eigen::MatrixXd& functionals) {
    if (functionals.rows() < 1) throw StructuralError("polytope: zero-dimensional functionals");
    if (!functionals.allFinite()) throw StructuralError("polytope: non-finite coefficient");
    auto c = collapse_pm(functionals, kGeoTol);
    if (c.reps.cols() == 0 || numeric_rank(c.reps) < functionals.rows()) {
        throw DegenerateBodyError("polytope: functionals do not span, body is unbounded");
    }
    return Polytope(Rep::Functionals, std::move(c.reps), std::move(c.multiplicity));
}

bool Polytope::contains(const Eigen::VectorXd& y, double tol) const {
    if (y.size() != vectors_.rows()) throw StructuralError("polytope: point dimension mismatch");
    if (rep_ == Rep::Functionals) {
        return (vectors_.transpose() * y).cwiseAbs().maxCoeff() <= 1.0 + tol;
    }
    // Gauge of conv{+-w_j} at y equals the support of its polar in direction y.
    return max_over_symmetric_slab(vectors_, y) <= 1.0 + tol;
}

Polytope polytope_from_frame(const FrameSet& frame, double cert_tol) {
    const auto cert = certify_unit_decomposition(frame, cert_tol);
    if (!cert.certified) {
        std::ostringstream os;
        os << "cube section: frame is not a unit decomposition (deviation " << cert.deviation << ")";
        throw PreconditionError(os.str());
    }
    return Polytope::from_functionals(frame.matrix());
}

Polytope cross_projection(const FrameSet& frame, double cert_tol) {
    const auto cert = certify_unit_decomposition(frame, cert_tol);
    if (!cert.certified) {
        std::ostringstream os;
        os << "cross projection: frame is not a unit decomposition (deviation " << cert.deviation
           << ")";
        throw PreconditionError(os.str());
    }
    return Polytope::from_vertices(frame.matrix());
}

Polytope enumerate_vertices(const Polytope& p) {
    if (p.is_vrep()) return p;
    return Polytope::from_vertices(hrep_vertices(p.vectors()));
}

double volume(const Polytope& p) {
    const std::size_t k = p.k();
    if (k > kExactMaxDim || static_cast<std::size_t>(p.vectors().cols()) > kExactMaxGenerators) {
        std::ostringstream os;
        os << "exact volume supports k <= " << kExactMaxDim << " with at most "
           << kExactMaxGenerators << " generators (got k = " << k << ", "
           << p.vectors().cols() << "); use estimate_volume";
        throw UnsupportedDimensionError(os.str());
    }
    const Eigen::MatrixXd vreps = vertex_reps(p);
    const Eigen::MatrixXd nreps = p.is_vrep() ? hrep_vertices(p.vectors()) : p.vectors();
    const auto verts = symmetric_closure(vreps);
    const auto normals = symmetric_closure(nreps);
    const auto kd = static_cast<Eigen::Index>(k);

    std::vector<Face> facets;
    for (const auto& a : normals) {
        Face f;
        for (std::size_t j = 0; j < verts.size(); ++j) {
            if (a.dot(verts[j]) >= 1.0 - kGeoTol) f.push_back(static_cast<int>(j));
        }
        if (f.empty() || affine_dim(verts, f) != kd - 1) continue;
        if (std::find(facets.begin(), facets.end(), f) != facets.end()) continue;
        facets.push_back(std::move(f));
    }

    BoundaryTriangulator tri(verts, facets);
    double factorial = 1.0;
    for (std::size_t i = 2; i <= k; ++i) factorial *= static_cast<double>(i);
    double total = 0.0;
    Eigen::MatrixXd s(kd, kd);
    for (const auto& f : facets) {
        for (const auto& simplex : tri.simplices(f, kd - 1)) {
            for (Eigen::Index c = 0; c < kd; ++c) s.col(c) = verts[static_cast<std::size_t>(simplex[static_cast<std::size_t>(c)])];
            total += std::abs(s.determinant());
        }
    }
    return total / factorial;
}

VolumeEstimate estimate_volume(const Polytope& p, std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw StructuralError("estimate_volume: need at least one sample");
    const Eigen::MatrixXd vreps = vertex_reps(p);
    std::vector<Eigen::VectorXd> pts;
    for (Eigen::Index j = 0; j < vreps.cols(); ++j) pts.emplace_back(vreps.col(j));
    const auto lw = lowner_symmetric(pts);
    // Shrink the matrix so the ellipsoid contains every vertex exactly.
    const Eigen::MatrixXd a = lw.ellipsoid.matrix() / std::max(1.0, lw.max_gauge);
    const Ellipsoid box(a);
    const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(a).matrixL();
    const Eigen::MatrixXd map = l.transpose().inverse();  // x = L^{-T} z
    const auto k = static_cast<Eigen::Index>(p.k());

    constexpr std::size_t chunk = 1 << 14;
    const std::size_t chunks = (samples + chunk - 1) / chunk;
    std::vector<std::size_t> hits(chunks, 0);
    auto run_chunk = [&](std::size_t c) {
        Rng rng(derive_seed(seed, c));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const std::size_t begin = c * chunk;
        const std::size_t end = std::min(samples, begin + chunk);
        std::size_t h = 0;
        Eigen::VectorXd z(k);
        for (std::size_t i = begin; i < end; ++i) {
            for (Eigen::Index d = 0; d < k; ++d) z(d) = normal(rng);
            const double r = std::pow(unif(rng), 1.0 / static_cast<double>(k));
            z *= r / z.norm();
            if (p.contains(map * z, 0.0)) ++h;
        }
        hits[c] = h;
    };
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), chunks));
    if (workers == 1) {
        for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t c = w; c < chunks; c += workers) run_chunk(c);
            });
        }
        for (auto& t : pool) t.join();
    }

    VolumeEstimate est;
    est.samples = samples;
    est.hits = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
    const double frac = static_cast<double>(est.hits) / static_cast<double>(samples);
    const double vol_e = ellipsoid_volume(box);
    est.estimate = frac * vol_e;
    est.standard_error = std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples)) * vol_e;
    return est;
}

double support_function(const Polytope& p, const Eigen::VectorXd& direction) {
    if (direction.size() != static_cast<Eigen::Index>(p.k())) {
        throw StructuralError("support: direction dimension mismatch");
    }
    if (p.is_vrep()) return (p.vectors().transpose() * direction).cwiseAbs().maxCoeff();
    return max_over_symmetric_slab(p.vectors(), direction);
}

Polytope polar(const Polytope& p) {
    return p.is_vrep() ? Polytope::from_functionals(p.vectors())
                       : Polytope::from_vertices(p.vectors());
}

Subspace equality_subspace(std::size_t n, std::size_t k) {
    if (k < 1 || k > n || n % k != 0) {
        std::ostringstream os;
        os << "equality subspace: k = " << k << " must divide n = " << n;
        throw PreconditionError(os.str());
    }
    const std::size_t block = n / k;
    const double c = std::sqrt(static_cast<double>(k) / static_cast<double>(n));
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < block; ++i) {
            b(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(block * j + i)) = c;
        }
    }
    return Subspace(std::move(b));
}

double cube_volume(std::size_t k) { return std::ldexp(1.0, static_cast<int>(k)); }

double cross_polytope_volume(std::size_t k) {
    return std::ldexp(1.0, static_cast<int>(k)) / std::tgamma(static_cast<double>(k) + 1.0);
}

}  // namespace jlvol
