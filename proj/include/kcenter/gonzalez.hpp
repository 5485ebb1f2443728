#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcenter/core.hpp"
#include "kcenter/rng.hpp"

namespace kcenter {

/// Configuration for the greedy farthest-first traversal.
struct GonConfig {
    enum class Start { FixedPosition, SeededRandom };

    std::size_t k = 1;
    Start start = Start::FixedPosition;
    std::size_t start_position = 0;  // position within the subset, for FixedPosition
    std::uint64_t seed = 0;          // consumed only by SeededRandom

    void validate() const {
        if (k < 1) throw std::invalid_argument("gon: k must be >= 1");
    }
};

/// Full trace of one greedy run.
struct GonRun {
    IndexSet centers;                // in selection order
    double radius = 0.0;             // covering radius over the subset
    std::vector<double> farthest_sequence;  // d(new center, previous centers), per pick
};

/// Farthest-first traversal over `subset`. Starts from one point, then
/// repeatedly promotes the point farthest from the chosen centers until
/// min(k, |subset|) centers are picked. A nearest-center distance array is
/// maintained incrementally: one pass over the subset per selected center,
/// so exactly k * |subset| distance evaluations are charged to `counter`.
/// Ties in the farthest-point argmax go to the lowest point index.
inline GonRun gon_run(const PointSet& ps, std::span<const PointIndex> subset,
                      const GonConfig& cfg, CostCounter& counter) {
    cfg.validate();
    if (subset.empty()) throw std::invalid_argument("gon: empty subset");

    const std::size_t n = subset.size();
    const std::size_t k = std::min(cfg.k, n);
    const std::size_t dim = ps.dim();

    std::size_t start_pos = cfg.start_position % n;
    if (cfg.start == GonConfig::Start::SeededRandom) {
        Rng rng(cfg.seed);
        start_pos = rng.uniform_index(n);
    }

    // column-major copy of the subset; the scan below is the hot loop
    std::vector<double> cols(n * dim);
    for (std::size_t t = 0; t < dim; ++t)
        for (std::size_t i = 0; i < n; ++i) cols[t * n + i] = ps.row(subset[i])[t];

    std::vector<double> best_sq(n, std::numeric_limits<double>::infinity());
    std::vector<char> chosen(n, 0);

    GonRun run;
    run.centers.reserve(k);
    run.farthest_sequence.reserve(k > 0 ? k - 1 : 0);

    std::size_t next_pos = start_pos;
    double next_sq = 0.0;
    for (std::size_t picked = 0; picked < k; ++picked) {
        if (picked > 0) run.farthest_sequence.push_back(std::sqrt(next_sq));
        run.centers.push_back(subset[next_pos]);
        chosen[next_pos] = 1;

        // one pass: fold the new center into the nearest-center distances
        const double* c = ps.row(subset[next_pos]);
        if (dim == 2) {
            const double cx = c[0], cy = c[1];
            const double* xs = cols.data();
            const double* ys = cols.data() + n;
            for (std::size_t i = 0; i < n; ++i) {
                const double dx = xs[i] - cx, dy = ys[i] - cy;
                const double s = dx * dx + dy * dy;
                if (s < best_sq[i]) best_sq[i] = s;
            }
        } else if (dim == 3) {
            const double cx = c[0], cy = c[1], cz = c[2];
            const double* xs = cols.data();
            const double* ys = cols.data() + n;
            const double* zs = cols.data() + 2 * n;
            for (std::size_t i = 0; i < n; ++i) {
                const double dx = xs[i] - cx, dy = ys[i] - cy, dz = zs[i] - cz;
                const double s = dx * dx + dy * dy + dz * dz;
                if (s < best_sq[i]) best_sq[i] = s;
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (std::size_t t = 0; t < dim; ++t) {
                    const double d = cols[t * n + i] - c[t];
                    s += d * d;
                }
                if (s < best_sq[i]) best_sq[i] = s;
            }
        }
        counter.distance_evals += n;

        // farthest not-yet-chosen point, ties to the lowest point index
        bool found = false;
        next_pos = 0;
        next_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (chosen[i]) continue;
            if (!found || best_sq[i] > next_sq ||
                (best_sq[i] == next_sq && subset[i] < subset[next_pos])) {
                next_sq = best_sq[i];
                next_pos = i;
                found = true;
            }
        }
        if (!found) {
            next_sq = 0.0;  // every point is a center; radius is 0
            break;
        }
    }
    run.radius = std::sqrt(next_sq);
    return run;
}

/// Greedy k-center solution over `subset` (defaults to the whole set).
inline CenterSolution gon(const PointSet& ps, std::span<const PointIndex> subset,
                          const GonConfig& cfg, CostCounter& counter) {
    GonRun run = gon_run(ps, subset, cfg, counter);
    CenterSolution sol;
    sol.centers = std::move(run.centers);
    sol.radius = run.radius;
    sol.algorithm = "gon";
    sol.params = "k=" + std::to_string(cfg.k);
    sol.seed = cfg.seed;
    return sol;
}

inline CenterSolution gon(const PointSet& ps, const GonConfig& cfg, CostCounter& counter) {
    const IndexSet everything = all_indices(ps.size());
    return gon(ps, everything, cfg, counter);
}

/// Distance of each newly chosen center to the previously chosen set, in
/// selection order. The first center has no predecessor, so the sequence
/// has one entry fewer than the number of centers.
inline std::vector<double> gon_farthest_sequence(const PointSet& ps,
                                                 std::span<const PointIndex> subset,
                                                 const GonConfig& cfg, CostCounter& counter) {
    return gon_run(ps, subset, cfg, counter).farthest_sequence;
}

}  // namespace kcenter
