#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kcenter/core.hpp"
#include "kcenter/gonzalez.hpp"
#include "kcenter/mapreduce.hpp"

namespace kcenter {

/// Parameters of the iterative sampling scheme.
///
/// Per iteration, while |R| > (4/eps) * k * n^eps * log n, each remaining
/// point enters the sample S with probability 9 k n^eps (log n)/|R| and the
/// pivot pool H with probability 4 n^eps (log n)/|R| (a point drawn into
/// both goes to S only). A pivot v picked from H sets the discard
/// threshold: points at distance <= d(v, S) from the sample leave R, and
/// newly sampled points always leave R. phi scales the pivot's rank:
/// larger phi keeps the success-probability guarantee, smaller phi removes
/// more points per iteration and runs faster.
///
/// One log base is used for the loop threshold, the draw probabilities and
/// the pivot rank. It defaults to 2: the per-iteration shrink of R is
/// base-independent, and only the base-2 stopping threshold reproduces the
/// documented two-to-three-iteration behavior at the benchmark scales
/// (natural log runs one iteration longer). Set log_base = 0 for natural
/// log to test the sensitivity.
struct EimConfig {
    std::size_t k = 1;
    double eps = 0.1;
    double phi = 8.0;
    std::uint64_t seed = 0;
    double log_base = 2.0;  // 0 = natural log; any base > 1 otherwise
    GonConfig::Start start = GonConfig::Start::FixedPosition;

    void validate() const {
        if (k < 1) throw std::invalid_argument("eim: k must be >= 1");
        if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eim: eps must be in (0,1)");
        if (!(phi > 0.0)) throw std::invalid_argument("eim: phi must be > 0");
        if (log_base != 0.0 && !(log_base > 1.0))
            throw std::invalid_argument("eim: log base must be > 1");
    }

    double log_of(double x) const {
        return log_base == 0.0 ? std::log(x) : std::log(x) / std::log(log_base);
    }

    /// Machines for a sampling round over r remaining points: ceil(r / n^eps).
    std::size_t sampling_machines(std::size_t r, std::size_t n) const {
        return static_cast<std::size_t>(
            std::ceil(static_cast<double>(r) / std::pow(static_cast<double>(n), eps)));
    }

    /// Machines for a removal round: ceil(n^(1-eps)).
    std::size_t removal_machines(std::size_t n) const {
        return static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 1.0 - eps)));
    }
};

/// State snapshot at an iteration boundary, for observers/tests.
struct EimState {
    std::size_t iteration = 0;
    IndexSet remaining;  // R
    IndexSet sample;     // S
    IndexSet pool;       // H used in this iteration
};

using EimObserver = std::function<void(const EimState&)>;

/// Pivot choice: order H by distance to S, farthest first (ties to the
/// lowest index), and return the element at 1-based rank ceil(phi * log n),
/// clamped into [1, |H|]. Charges |H| * |S| distance evaluations.
inline PointIndex select(const PointSet& ps, std::span<const PointIndex> pool,
                         std::span<const PointIndex> sample, double phi, std::size_t n,
                         CostCounter& counter, double log_base = 2.0,
                         double* pivot_sqdist = nullptr) {
    if (pool.empty()) throw std::invalid_argument("select: empty pivot pool");
    if (sample.empty()) throw std::invalid_argument("select: empty sample");

    const GatheredPoints block(ps, sample);
    std::vector<std::pair<double, PointIndex>> ordered;
    ordered.reserve(pool.size());
    for (PointIndex x : pool) ordered.emplace_back(block.min_sqdist(ps.row(x)), x);
    counter.distance_evals += pool.size() * sample.size();

    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    const double logn = log_base == 0.0 ? std::log(static_cast<double>(n))
                                        : std::log(static_cast<double>(n)) / std::log(log_base);
    std::size_t rank = static_cast<std::size_t>(std::ceil(phi * logn));
    rank = std::clamp<std::size_t>(rank, 1, ordered.size());

    if (pivot_sqdist) *pivot_sqdist = ordered[rank - 1].first;
    return ordered[rank - 1].second;
}

struct EimSampleResult {
    IndexSet sample_union;     // C = S ∪ R, ascending
    std::size_t sample_size = 0;    // |S| at termination
    std::size_t iterations = 0;     // T
    std::vector<std::size_t> remaining_history;  // |R| after each iteration
    std::vector<std::size_t> pool_history;       // |H| per iteration
    MrTrace trace;
};

/// The sampling loop. Each iteration is three MapReduce rounds: draw S/H
/// additions (no distance work), pick the pivot on one machine, then drop
/// covered and sampled points from R across ceil(n^(1-eps)) machines.
/// Distances to the sample are recomputed in full each round against the
/// post-draw sample, matching the per-round operation model.
inline EimSampleResult eim_sample(const PointSet& ps, const EimConfig& cfg,
                                  const MrOptions& options = {},
                                  const EimObserver& observer = {}) {
    cfg.validate();
    const std::size_t n = ps.size();
    const double n_eps = std::pow(static_cast<double>(n), cfg.eps);
    const double logn = cfg.log_of(static_cast<double>(n));
    const double threshold = (4.0 / cfg.eps) * static_cast<double>(cfg.k) * n_eps * logn;

    EimSampleResult result;
    IndexSet remaining = all_indices(n);
    IndexSet sample;
    std::vector<char> in_sample(n, 0);
    std::size_t round_id = 0;

    while (static_cast<double>(remaining.size()) > threshold) {
        ++result.iterations;
        const std::string tag = std::to_string(result.iterations);

        // -- round 1: independent membership draws over R ------------------
        const double r_size = static_cast<double>(remaining.size());
        const double p_sample = std::min(1.0, 9.0 * cfg.k * n_eps * logn / r_size);
        const double p_pool = std::min(1.0, 4.0 * n_eps * logn / r_size);

        const std::size_t m_samp =
            std::min(remaining.size(), cfg.sampling_machines(remaining.size(), n));
        const auto draw_parts = partition(remaining, m_samp, options.rule,
                                          machine_seed(cfg.seed, round_id, 0x70617274ULL));
        auto [draws, draw_record] = run_round(
            "eim-sample-" + tag, draw_parts, options.mode,
            [&](std::size_t machine, const IndexSet& part,
                CostCounter&) -> std::pair<IndexSet, IndexSet> {
                Rng rng(machine_seed(cfg.seed, round_id, machine));
                std::pair<IndexSet, IndexSet> out;
                for (PointIndex x : part) {
                    const bool to_sample = rng.uniform() < p_sample;
                    const bool to_pool = rng.uniform() < p_pool;
                    if (to_sample)
                        out.first.push_back(x);  // S wins a double draw
                    else if (to_pool)
                        out.second.push_back(x);
                }
                return out;
            });
        result.trace.rounds.push_back(std::move(draw_record));
        ++round_id;

        IndexSet drawn, pool;
        for (auto& d : draws) {
            drawn.insert(drawn.end(), d.first.begin(), d.first.end());
            pool.insert(pool.end(), d.second.begin(), d.second.end());
        }
        // An empty draw cannot make progress; promote the lowest remaining
        // point so the loop still shrinks R. (Reachable only with
        // astronomically unlikely seeds, but it keeps termination
        // unconditional.)
        if (drawn.empty() && (pool.empty() || sample.empty())) drawn.push_back(remaining.front());

        for (PointIndex x : drawn) in_sample[x] = 1;
        sample.insert(sample.end(), drawn.begin(), drawn.end());
        const GatheredPoints sample_block(ps, sample);

        // -- round 2: pivot selection on one machine -----------------------
        double pivot_sq = std::numeric_limits<double>::infinity();
        const std::vector<IndexSet> select_part{pool};
        auto [pivots, select_record] = run_round(
            "eim-select-" + tag, select_part, options.mode,
            [&](std::size_t, const IndexSet& part, CostCounter& counter) -> double {
                if (part.empty()) return std::numeric_limits<double>::infinity();
                double sq = 0.0;
                select(ps, part, sample, cfg.phi, n, counter, cfg.log_base, &sq);
                return sq;
            });
        pivot_sq = pivots.front();
        result.trace.rounds.push_back(std::move(select_record));
        ++round_id;

        // -- round 3: drop covered and sampled points from R ---------------
        const std::size_t m_rem = std::min(remaining.size(), cfg.removal_machines(n));
        const auto rem_parts = partition(remaining, m_rem, options.rule,
                                         machine_seed(cfg.seed, round_id, 0x70617274ULL));
        auto [kept_parts, rem_record] = run_round(
            "eim-remove-" + tag, rem_parts, options.mode,
            [&](std::size_t, const IndexSet& part, CostCounter& counter) -> IndexSet {
                IndexSet kept;
                std::size_t scanned = 0;
                for (PointIndex x : part) {
                    if (in_sample[x]) continue;  // sampled points always leave R
                    ++scanned;
                    const double sq = sample_block.min_sqdist(ps.row(x));
                    if (sq > pivot_sq) kept.push_back(x);
                }
                counter.distance_evals += scanned * sample.size();
                return kept;
            });
        result.trace.rounds.push_back(std::move(rem_record));
        ++round_id;

        IndexSet next;
        for (auto& kp : kept_parts) next.insert(next.end(), kp.begin(), kp.end());
        if (next.size() >= remaining.size())
            throw std::logic_error("eim_sample: no progress in an iteration");
        remaining = std::move(next);

        result.remaining_history.push_back(remaining.size());
        result.pool_history.push_back(pool.size());
        if (observer) {
            EimState state;
            state.iteration = result.iterations;
            state.remaining = remaining;
            state.sample = sample;
            state.pool = std::move(pool);
            observer(state);
        }
    }

    result.sample_size = sample.size();
    result.sample_union = std::move(sample);
    result.sample_union.insert(result.sample_union.end(), remaining.begin(), remaining.end());
    std::sort(result.sample_union.begin(), result.sample_union.end());
    return result;
}

struct EimResult {
    CenterSolution solution;
    std::size_t iterations = 0;    // sampling iterations T
    std::size_t sample_size = 0;   // |C| handed to the final greedy pass
    MrTrace trace;                 // 3T + 1 MapReduce rounds
};

/// Sampling followed by one greedy k-center pass over the returned sample
/// on a single machine. The radius is evaluated over the full point set
/// (not charged to the trace). When the loop never runs (k large relative
/// to n) the sample is the whole set and this is exactly the sequential
/// greedy algorithm.
inline EimResult eim(const PointSet& ps, const EimConfig& cfg, const MrOptions& options = {},
                     const EimObserver& observer = {}) {
    EimSampleResult sampled = eim_sample(ps, cfg, options, observer);

    EimResult result;
    result.iterations = sampled.iterations;
    result.sample_size = sampled.sample_union.size();
    result.trace = std::move(sampled.trace);

    const std::size_t final_round = result.trace.rounds.size();
    const std::vector<IndexSet> final_part{std::move(sampled.sample_union)};
    auto [outputs, record] = run_round(
        "eim-final", final_part, options.mode,
        [&](std::size_t, const IndexSet& part, CostCounter& counter) -> IndexSet {
            GonConfig gc;
            gc.k = cfg.k;
            gc.start = cfg.start;
            gc.start_position = 0;
            gc.seed = machine_seed(cfg.seed, final_round, 0);
            return gon_run(ps, part, gc, counter).centers;
        });
    result.trace.rounds.push_back(std::move(record));

    result.solution.centers = std::move(outputs.front());
    result.solution.radius = covering_radius(ps, result.solution.centers);
    result.solution.algorithm = "eim";
    result.solution.params = "k=" + std::to_string(cfg.k) + " eps=" + std::to_string(cfg.eps) +
                             " phi=" + std::to_string(cfg.phi);
    result.solution.seed = cfg.seed;
    return result;
}

// ---------------------------------------------------------------------------
// Feasibility of the (phi, b, gamma) parameter combination, from the
// concentration argument behind the sampling guarantee.

/// With x = 1 + gamma, checks
///   (phi + x + sqrt(2 x phi + x^2)) / b  <=  phi + x/2 - sqrt(2 x phi + x^2/4).
inline bool phi_feasible(double phi, double b, double gamma) {
    if (!(b > 0.0)) throw std::invalid_argument("phi_feasible: b must be > 0");
    if (gamma < 0.0) throw std::invalid_argument("phi_feasible: gamma must be >= 0");
    const double x = 1.0 + gamma;
    const double lhs = (phi + x + std::sqrt(2.0 * x * phi + x * x)) / b;
    const double rhs = phi + x / 2.0 - std::sqrt(2.0 * x * phi + x * x / 4.0);
    return lhs <= rhs;
}

/// Smallest phi for which phi_feasible holds, by bisection.
inline double phi_critical(double b, double gamma) {
    double lo = 1e-9, hi = 1e9;
    if (phi_feasible(lo, b, gamma)) return lo;
    if (!phi_feasible(hi, b, gamma))
        return std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (phi_feasible(mid, b, gamma) ? hi : lo) = mid;
    }
    return hi;
}

/// Conventionally quoted safe threshold for phi at b = 5, gamma -> 0. Note
/// that phi_critical(5, 0) puts the inequality's actual crossover lower
/// (about 3.95); both values are exposed so callers can compare.
inline constexpr double kPhiSafeThreshold = 5.15;

}  // namespace kcenter
