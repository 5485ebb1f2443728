#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "kcenter/core.hpp"
#include "kcenter/rng.hpp"

namespace kcenter {

enum class ExecMode { Sequential, ParallelThreads };
enum class PartitionRule { Contiguous, RoundRobin, SeededShuffle };

/// How reducers execute and how mappers split index sets. Algorithms that
/// derive their own machine counts take just this.
struct MrOptions {
    ExecMode mode = ExecMode::Sequential;
    PartitionRule rule = PartitionRule::Contiguous;
};

/// Simulated cluster: m machines of capacity c points each.
struct MrConfig {
    std::size_t machines = 50;
    std::size_t capacity = 1;
    ExecMode mode = ExecMode::Sequential;
    PartitionRule rule = PartitionRule::Contiguous;

    void validate() const {
        if (machines < 1) throw std::invalid_argument("MrConfig: machines must be >= 1");
        if (capacity < 1) throw std::invalid_argument("MrConfig: capacity must be >= 1");
    }
};

/// Cost record of one MapReduce round. The round's reported cost is the
/// maximum over its machines, never the sum; data movement between machines
/// is not costed at all.
struct RoundRecord {
    std::string label;
    std::vector<CostCounter> machine_costs;
    std::uint64_t max_distance_evals = 0;
    std::uint64_t max_wall_nanos = 0;
    std::uint64_t sum_distance_evals = 0;

    std::size_t machine_count() const { return machine_costs.size(); }

    void finish() {
        max_distance_evals = 0;
        max_wall_nanos = 0;
        sum_distance_evals = 0;
        for (const CostCounter& c : machine_costs) {
            max_distance_evals = std::max(max_distance_evals, c.distance_evals);
            max_wall_nanos = std::max(max_wall_nanos, c.wall_nanos);
            sum_distance_evals += c.distance_evals;
        }
    }
};

struct MrTrace {
    std::vector<RoundRecord> rounds;

    /// Simulated makespan: per-round max machine cost, summed over rounds.
    std::uint64_t makespan_distance_evals() const {
        std::uint64_t s = 0;
        for (const auto& r : rounds) s += r.max_distance_evals;
        return s;
    }
    std::uint64_t makespan_wall_nanos() const {
        std::uint64_t s = 0;
        for (const auto& r : rounds) s += r.max_wall_nanos;
        return s;
    }
    std::uint64_t total_distance_evals() const {
        std::uint64_t s = 0;
        for (const auto& r : rounds) s += r.sum_distance_evals;
        return s;
    }
    std::uint64_t round_evals(const std::string& label_prefix) const {
        std::uint64_t s = 0;
        for (const auto& r : rounds)
            if (r.label.rfind(label_prefix, 0) == 0) s += r.sum_distance_evals;
        return s;
    }
};

inline void write_trace_csv(std::ostream& out, const MrTrace& trace) {
    out << "round_label,machine_count,max_distance_evals,max_wall_nanos,sum_distance_evals\n";
    for (const auto& r : trace.rounds)
        out << r.label << ',' << r.machine_count() << ',' << r.max_distance_evals << ','
            << r.max_wall_nanos << ',' << r.sum_distance_evals << '\n';
}

/// Split `indices` into m parts: disjoint, covering, each of size at most
/// ceil(|indices|/m). Deterministic given rule and seed. Parts can be empty
/// only when there are fewer indices than machines.
inline std::vector<IndexSet> partition(std::span<const PointIndex> indices, std::size_t m,
                                       PartitionRule rule, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("partition: machine count must be >= 1");
    if (indices.empty()) throw std::invalid_argument("partition: empty index set");

    const std::size_t n = indices.size();
    std::vector<IndexSet> parts(m);

    IndexSet shuffled;
    std::span<const PointIndex> src = indices;
    if (rule == PartitionRule::SeededShuffle) {
        shuffled.assign(indices.begin(), indices.end());
        Rng rng(mix64(seed ^ 0x7061727469ULL));
        for (std::size_t i = n - 1; i > 0; --i)
            std::swap(shuffled[i], shuffled[rng.uniform_index(i + 1)]);
        src = shuffled;
    }

    if (rule == PartitionRule::RoundRobin) {
        for (std::size_t i = 0; i < n; ++i)
            parts[i % m].push_back(src[i]);
    } else {
        // contiguous blocks (also used for the shuffled order)
        const std::size_t q = n / m, r = n % m;
        std::size_t pos = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t len = q + (i < r ? 1 : 0);
            parts[i].assign(src.begin() + pos, src.begin() + pos + len);
            pos += len;
        }
    }
    return parts;
}

namespace detail {

class ScopedTimer {
public:
    explicit ScopedTimer(std::uint64_t& sink)
        : sink_(sink), start_(std::chrono::steady_clock::now()) {}
    ~ScopedTimer() {
        const auto end = std::chrono::steady_clock::now();
        sink_ += static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(end - start_).count());
    }

private:
    std::uint64_t& sink_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// Run one reducer per part and collect outputs in machine-index order.
/// The reducer signature is Out(std::size_t machine, const IndexSet& part,
/// CostCounter&). Outputs must depend only on (part, derived seed), so the
/// two execution modes produce identical results; wall clocks of course
/// differ. A reducer failure aborts the round naming the failing part.
template <typename Reducer>
auto run_round(const std::string& label, const std::vector<IndexSet>& parts, ExecMode mode,
               Reducer&& reducer)
    -> std::pair<std::vector<decltype(reducer(std::size_t{0}, parts[0],
                                              std::declval<CostCounter&>()))>,
                 RoundRecord> {
    using Out = decltype(reducer(std::size_t{0}, parts[0], std::declval<CostCounter&>()));

    const std::size_t m = parts.size();
    std::vector<Out> outputs(m);
    RoundRecord record;
    record.label = label;
    record.machine_costs.assign(m, CostCounter{});

    auto run_one = [&](std::size_t i) {
        CostCounter& counter = record.machine_costs[i];
        detail::ScopedTimer timer(counter.wall_nanos);
        outputs[i] = reducer(i, parts[i], counter);
    };

    if (mode == ExecMode::Sequential || m == 1) {
        for (std::size_t i = 0; i < m; ++i) {
            try {
                run_one(i);
            } catch (const std::exception& e) {
                throw std::runtime_error("round '" + label + "': reducer failed on part " +
                                         std::to_string(i) + ": " + e.what());
            }
        }
    } else {
        const std::size_t workers =
            std::min<std::size_t>(m, std::max(1u, std::thread::hardware_concurrency()));
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(m);
        std::atomic<bool> failed{false};

        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= m) break;
                if (failed.load(std::memory_order_relaxed)) continue;  // drain remaining
                try {
                    run_one(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                }
            }
        };

        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();

        for (std::size_t i = 0; i < m; ++i) {
            if (!errors[i]) continue;
            try {
                std::rethrow_exception(errors[i]);
            } catch (const std::exception& e) {
                throw std::runtime_error("round '" + label + "': reducer failed on part " +
                                         std::to_string(i) + ": " + e.what());
            }
        }
    }

    record.finish();
    return {std::move(outputs), std::move(record)};
}

}  // namespace kcenter
