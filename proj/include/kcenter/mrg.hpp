#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcenter/core.hpp"
#include "kcenter/gonzalez.hpp"
#include "kcenter/mapreduce.hpp"

namespace kcenter {

/// Outcome of a multi-round parallel greedy run.
///
/// `while_iterations` is the number of center-reduction rounds i; the final
/// single-machine pass adds one more, so rounds_used = i + 1 and the
/// guaranteed approximation factor is 2 * (i + 1). Both counts are exposed
/// to keep the off-by-one unambiguous.
struct MrgResult {
    CenterSolution solution;
    std::size_t while_iterations = 0;
    std::size_t rounds_used = 0;
    std::size_t approx_bound = 0;  // 2 * rounds_used
    std::vector<std::size_t> machine_counts;  // machines per reduction round
    MrTrace trace;
};

/// Closed-form bound on the machines needed after i reduction rounds:
/// m * (k/c)^i + (1 - (k/c)^i) / (1 - k/c).
inline double machine_bound(std::size_t m, std::size_t k, std::size_t c, std::size_t i) {
    const double r = static_cast<double>(k) / static_cast<double>(c);
    const double ri = std::pow(r, static_cast<double>(i));
    if (k == c) return static_cast<double>(m) + static_cast<double>(i);
    return static_cast<double>(m) * ri + (1.0 - ri) / (1.0 - r);
}

/// Number of MapReduce rounds the reduction recurrence needs before the
/// surviving centers fit one machine, plus one for the final pass. Assumes
/// the data does not already fit a single machine. Throws when the
/// recurrence cannot make progress, which happens once k is too close to
/// the capacity (guaranteed convergence needs 2k < c).
inline std::size_t predict_rounds(std::size_t n, std::size_t k, std::size_t m, std::size_t c) {
    if (n < 1 || k < 1 || m < 1) throw std::invalid_argument("predict_rounds: bad arguments");
    if (c < k)
        throw std::invalid_argument("predict_rounds: cannot fit k centers on one machine");

    std::size_t survivors = k * m;  // centers after the first reduction round
    std::size_t iterations = 1;
    while (survivors > c) {
        const std::size_t machines = (survivors + c - 1) / c;
        const std::size_t next = k * machines;
        if (next >= survivors)
            throw std::runtime_error(
                "predict_rounds: recurrence may not converge (need 2k < c)");
        survivors = next;
        ++iterations;
    }
    return iterations + 1;
}

/// Multi-round parallel greedy: while the surviving set exceeds one
/// machine's capacity, partition it, run the greedy per machine, and keep
/// the union of the per-machine centers; finish with one greedy pass on a
/// single machine. The returned radius is evaluated over the full set
/// (that verification pass is not charged to the trace).
///
/// The first round uses cfg.machines, grown if needed so every part fits
/// capacity; later rounds use the minimum machines that fit the survivors.
inline MrgResult mrg(const PointSet& ps, std::size_t k, const MrConfig& cfg, std::uint64_t seed,
                     GonConfig::Start start = GonConfig::Start::FixedPosition) {
    cfg.validate();
    if (k < 1) throw std::invalid_argument("mrg: k must be >= 1");
    if (cfg.capacity < k)
        throw std::invalid_argument("mrg: cannot fit k centers on one machine (c < k)");

    const std::size_t c = cfg.capacity;
    MrgResult result;

    IndexSet survivors = all_indices(ps.size());
    std::size_t round_id = 0;

    while (survivors.size() > c) {
        const std::size_t need = (survivors.size() + c - 1) / c;
        const std::size_t machines =
            round_id == 0 ? std::max(cfg.machines, need) : need;

        const auto parts = partition(survivors, machines, cfg.rule,
                                     machine_seed(seed, round_id, 0x70617274ULL));
        for (const auto& p : parts)
            if (p.size() > c) throw std::logic_error("mrg: part exceeds machine capacity");

        auto [outputs, record] = run_round(
            "mrg-round-" + std::to_string(round_id + 1), parts, cfg.mode,
            [&](std::size_t machine, const IndexSet& part, CostCounter& counter) -> IndexSet {
                if (part.empty()) return {};
                GonConfig gc;
                gc.k = k;
                gc.start = start;
                gc.start_position = 0;
                gc.seed = machine_seed(seed, round_id, machine);
                return gon_run(ps, part, gc, counter).centers;
            });
        result.trace.rounds.push_back(std::move(record));
        result.machine_counts.push_back(machines);

        IndexSet next;
        for (auto& out : outputs) next.insert(next.end(), out.begin(), out.end());
        std::sort(next.begin(), next.end());
        if (next.size() >= survivors.size())
            throw std::runtime_error("mrg: reduction rounds make no progress (k too close to c)");
        survivors = std::move(next);
        ++round_id;
    }

    // final pass on a single machine
    const std::vector<IndexSet> final_part{survivors};
    auto [outputs, record] = run_round(
        "mrg-final", final_part, cfg.mode,
        [&](std::size_t, const IndexSet& part, CostCounter& counter) -> IndexSet {
            GonConfig gc;
            gc.k = k;
            gc.start = start;
            gc.start_position = 0;
            gc.seed = machine_seed(seed, round_id, 0);
            return gon_run(ps, part, gc, counter).centers;
        });
    result.trace.rounds.push_back(std::move(record));

    result.while_iterations = round_id;
    result.rounds_used = round_id + 1;
    result.approx_bound = 2 * result.rounds_used;

    result.solution.centers = std::move(outputs.front());
    result.solution.radius = covering_radius(ps, result.solution.centers);
    result.solution.algorithm = "mrg";
    result.solution.params = "k=" + std::to_string(k) + " m=" + std::to_string(cfg.machines) +
                             " c=" + std::to_string(c);
    result.solution.seed = seed;
    return result;
}

}  // namespace kcenter
