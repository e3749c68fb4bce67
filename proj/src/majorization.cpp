#include "jlvol/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "jlvol/errors.hpp"
#include "jlvol/rng.hpp"

namespace jlvol {

namespace {

std::vector<double> sorted_desc(std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

void require_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) throw StructuralError("majorization: non-finite entry");
    }
}

}  // namespace

std::optional<std::size_t> first_violated_prefix(const std::vector<double>& a,
                                                 const std::vector<double>& b, double tol) {
    if (a.size() != b.size()) {
        std::ostringstream os;
        os << "majorization: length mismatch (" << a.size() << " vs " << b.size() << ")";
        throw StructuralError(os.str());
    }
    require_finite(a);
    require_finite(b);
    const auto sa = sorted_desc(a);
    const auto sb = sorted_desc(b);
    double pa = 0.0;
    double pb = 0.0;
    for (std::size_t m = 0; m < sa.size(); ++m) {
        pa += sa[m];
        pb += sb[m];
        if (pa < pb - tol) return m + 1;
    }
    if (std::abs(pa - pb) > tol) return sa.size() + 1;
    return std::nullopt;
}

bool majorizes(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    return !first_violated_prefix(a, b, tol).has_value();
}

std::vector<double> rank_k_spectrum(std::size_t n, std::size_t k) {
    std::vector<double> s(n, 0.0);
    std::fill_n(s.begin(), std::min(k, n), 1.0);
    return s;
}

bool is_realizable(const NormProfile& profile, std::size_t n, double tol) {
    if (profile.k < 1 || profile.k > n) {
        throw StructuralError("realizability: need 1 <= k <= n");
    }
    if (profile.entries.size() != n) {
        throw StructuralError("realizability: profile length differs from n");
    }
    return majorizes(rank_k_spectrum(n, profile.k), profile.entries, tol);
}

// Start from A = [I_k | 0], whose Gram matrix is diag(1,..,1,0,..,0). Targets
// are consumed from largest to smallest. The active principal block of the
// Gram matrix stays diagonal, so the active columns are pairwise orthogonal
// and rotating two of them moves squared norm between them as a convex
// combination. Each step picks active columns p, q that are adjacent in
// sorted order with d_p >= target >= d_q, rotates so |a_p|^2 = target, and
// retires p. The remaining active values still majorize the remaining
// targets, so at most n - 1 rotations are needed.
FrameSet construct_realization(const NormProfile& profile, std::size_t n) {
    if (profile.k < 1 || profile.k > n || profile.entries.size() != n) {
        throw StructuralError("realization: need 1 <= k <= n and n profile entries");
    }
    const auto spectrum = rank_k_spectrum(n, profile.k);
    if (auto m = first_violated_prefix(spectrum, profile.entries, kMajTol)) {
        std::ostringstream os;
        if (*m <= n) {
            os << "realization: profile is not realizable in R^" << profile.k
               << "; prefix condition fails at m = " << *m;
        } else {
            os << "realization: profile is not realizable in R^" << profile.k
               << "; entries do not sum to " << profile.k;
        }
        throw PreconditionError(os.str());
    }

    const auto kk = static_cast<Eigen::Index>(profile.k);
    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(kk, nn);
    for (Eigen::Index i = 0; i < kk; ++i) a(i, i) = 1.0;

    // Targets by decreasing value (stable, so ties keep input order).
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return profile.entries[x] > profile.entries[y];
    });

    std::vector<double> d(spectrum);
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), 0);
    std::vector<std::size_t> column_for_target(n);

    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t target_idx = order[t];
        const double target = profile.entries[target_idx];
        if (active.size() == 1) {
            column_for_target[target_idx] = active.front();
            break;
        }
        // Active columns sorted by current squared norm, descending.
        std::vector<std::size_t> by_value(active);
        std::stable_sort(by_value.begin(), by_value.end(),
                         [&](std::size_t x, std::size_t y) { return d[x] > d[y]; });
        std::size_t p = by_value.front();
        std::size_t q = by_value.front();
        if (target >= d[by_value.front()]) {
            p = q = by_value.front();
        } else if (target <= d[by_value.back()]) {
            p = q = by_value.back();
        } else {
            for (std::size_t r = 0; r + 1 < by_value.size(); ++r) {
                if (d[by_value[r]] >= target && target >= d[by_value[r + 1]]) {
                    p = by_value[r];
                    q = by_value[r + 1];
                    break;
                }
            }
        }
        if (p != q && d[p] > d[q]) {
            // cos^2 d_p + sin^2 d_q = target
            const double s2 = std::clamp((d[p] - target) / (d[p] - d[q]), 0.0, 1.0);
            const double s = std::sqrt(s2);
            const double c = std::sqrt(1.0 - s2);
            const Eigen::VectorXd ap = a.col(static_cast<Eigen::Index>(p));
            const Eigen::VectorXd aq = a.col(static_cast<Eigen::Index>(q));
            a.col(static_cast<Eigen::Index>(p)) = c * ap + s * aq;
            a.col(static_cast<Eigen::Index>(q)) = -s * ap + c * aq;
            const double sum = d[p] + d[q];
            d[p] = target;
            d[q] = sum - target;
        }
        column_for_target[target_idx] = p;
        active.erase(std::find(active.begin(), active.end(), p));
    }

    Eigen::MatrixXd out(kk, nn);
    for (std::size_t i = 0; i < n; ++i) {
        out.col(static_cast<Eigen::Index>(i)) =
            a.col(static_cast<Eigen::Index>(column_for_target[i]));
    }
    return FrameSet(std::move(out));
}

NormProfile random_realizable_profile(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 1 || k > n) throw StructuralError("random profile: need 1 <= k <= n");
    Rng rng(seed);
    std::exponential_distribution<double> expo(1.0);
    const double kd = static_cast<double>(k);
    for (;;) {
        std::vector<double> c(n);
        for (auto& x : c) x = expo(rng);
        const double total = std::accumulate(c.begin(), c.end(), 0.0);
        if (!(total > 0.0)) continue;
        for (auto& x : c) x *= kd / total;

        bool ok = false;
        for (int iter = 0; iter < 100; ++iter) {
            double excess = 0.0;
            double headroom = 0.0;
            for (double x : c) {
                if (x > 1.0) excess += x - 1.0;
                else headroom += 1.0 - x;
            }
            if (excess <= 0.0) {
                ok = true;
                break;
            }
            for (auto& x : c) {
                if (x > 1.0) x = 1.0;
                else if (headroom > 0.0) x += excess * (1.0 - x) / headroom;
            }
        }
        if (!ok) continue;
        NormProfile p{std::move(c), k};
        if (is_realizable(p, n)) return p;
    }
}

}  // namespace jlvol
