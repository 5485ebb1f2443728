#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcenter/core.hpp"

namespace kcenter {

/// Result of exhaustive k-center minimization. Centers are restricted to
/// input points. `enumerated` counts the candidate center sets examined.
struct OracleResult {
    double opt_radius = 0.0;
    IndexSet opt_centers;
    std::uint64_t enumerated = 0;
};

namespace detail {

inline double binom(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
    return r;
}

}  // namespace detail

/// Exhaustively minimize the covering radius over all k-subsets of points.
/// Candidate sets are visited in lexicographic order and a set is adopted
/// only on strict improvement, so ties resolve to the lexicographically
/// smallest center set. A candidate is abandoned as soon as some point's
/// nearest-center distance reaches the incumbent radius.
inline OracleResult exact_kcenter(const PointSet& ps, std::size_t k,
                                  double budget = 1e7) {
    if (k < 1) throw std::invalid_argument("exact_kcenter: k must be >= 1");
    const std::size_t n = ps.size();
    k = std::min(k, n);

    const double combos = detail::binom(n, k);
    if (combos > budget)
        throw std::runtime_error("exact_kcenter: C(" + std::to_string(n) + "," +
                                 std::to_string(k) + ") = " + std::to_string(combos) +
                                 " exceeds enumeration budget; use a smaller n or k");

    std::vector<std::size_t> comb(k);
    for (std::size_t i = 0; i < k; ++i) comb[i] = i;

    const std::size_t dim = ps.dim();
    OracleResult result;
    result.opt_radius = std::numeric_limits<double>::infinity();

    // Probing points far from the centroid first makes most candidates fail
    // fast; the minimum itself does not depend on this order.
    std::vector<PointIndex> probe = all_indices(n);
    {
        std::vector<double> centroid(dim, 0.0);
        for (PointIndex v = 0; v < n; ++v)
            for (std::size_t t = 0; t < dim; ++t) centroid[t] += ps.row(v)[t];
        for (double& c : centroid) c /= static_cast<double>(n);
        std::vector<double> key(n);
        for (PointIndex v = 0; v < n; ++v) key[v] = detail::sqdist(ps.row(v), centroid.data(), dim);
        std::sort(probe.begin(), probe.end(),
                  [&](PointIndex a, PointIndex b) { return key[a] > key[b]; });
    }

    auto evaluate = [&](const std::vector<std::size_t>& centers, double incumbent_sq) {
        double worst = 0.0;
        for (PointIndex v : probe) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c : centers) {
                const double s =
                    detail::sqdist(ps.row(v), ps.row(static_cast<PointIndex>(c)), dim);
                if (s < best) best = s;
            }
            if (best > worst) {
                worst = best;
                if (worst >= incumbent_sq) return incumbent_sq;  // cannot improve
            }
        }
        return worst;
    };

    double best_sq = std::numeric_limits<double>::infinity();
    for (;;) {
        ++result.enumerated;
        const double r_sq = evaluate(comb, best_sq);
        if (r_sq < best_sq) {
            best_sq = r_sq;
            result.opt_centers.assign(comb.begin(), comb.end());
        }
        // next combination in lexicographic order
        std::size_t i = k;
        while (i > 0 && comb[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) break;
        ++comb[i - 1];
        for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }

    result.opt_radius = std::sqrt(best_sq);
    return result;
}

/// Ratio of a solution's radius to the exact optimum. Degenerate optima
/// (duplicate-heavy inputs) follow the conventions: 0/0 is 1, r/0 is +inf.
inline double approx_factor(const PointSet& ps, const CenterSolution& solution, std::size_t k,
                            double budget = 1e7) {
    const OracleResult opt = exact_kcenter(ps, k, budget);
    if (opt.opt_radius == 0.0)
        return solution.radius > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    return solution.radius / opt.opt_radius;
}

}  // namespace kcenter
