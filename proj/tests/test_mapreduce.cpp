#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>

#include "kcenter/gonzalez.hpp"
#include "kcenter/mapreduce.hpp"

using namespace kcenter;

namespace {

IndexSet iota_set(std::size_t n) { return all_indices(n); }

IndexSet sorted_concat(const std::vector<IndexSet>& parts) {
    IndexSet all;
    for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace

TEST_CASE("contiguous partition", "[mapreduce]") {
    auto parts = partition(iota_set(6), 2, PartitionRule::Contiguous, 0);
    REQUIRE(parts == std::vector<IndexSet>{{0, 1, 2}, {3, 4, 5}});

    parts = partition(iota_set(5), 2, PartitionRule::Contiguous, 0);
    REQUIRE(parts[0].size() == 3);
    REQUIRE(parts[1].size() == 2);

    parts = partition(iota_set(7), 1, PartitionRule::Contiguous, 0);
    REQUIRE(parts.size() == 1);
    REQUIRE(parts[0] == iota_set(7));
}

TEST_CASE("round robin partition", "[mapreduce]") {
    const auto parts = partition(iota_set(5), 2, PartitionRule::RoundRobin, 0);
    REQUIRE(parts == std::vector<IndexSet>{{0, 2, 4}, {1, 3}});
}

TEST_CASE("partition law: disjoint cover with bounded part sizes", "[mapreduce]") {
    const IndexSet input = iota_set(23);
    for (auto rule : {PartitionRule::Contiguous, PartitionRule::RoundRobin,
                      PartitionRule::SeededShuffle}) {
        for (std::size_t m : {1, 2, 5, 23, 30}) {
            const auto parts = partition(input, m, rule, 42);
            REQUIRE(parts.size() == m);
            const std::size_t cap = (input.size() + m - 1) / m;
            std::size_t empties = 0;
            for (const auto& p : parts) {
                REQUIRE(p.size() <= cap);
                empties += p.empty();
            }
            if (m <= input.size()) REQUIRE(empties == 0);
            REQUIRE(sorted_concat(parts) == input);
        }
    }
}

TEST_CASE("seeded shuffle is deterministic and seed-sensitive", "[mapreduce]") {
    const IndexSet input = iota_set(64);
    const auto a = partition(input, 4, PartitionRule::SeededShuffle, 7);
    const auto b = partition(input, 4, PartitionRule::SeededShuffle, 7);
    const auto c = partition(input, 4, PartitionRule::SeededShuffle, 8);
    REQUIRE(a == b);
    REQUIRE(a != c);
}

TEST_CASE("partition rejects bad input", "[mapreduce]") {
    REQUIRE_THROWS_AS(partition(IndexSet{}, 2, PartitionRule::Contiguous, 0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(partition(iota_set(4), 0, PartitionRule::Contiguous, 0),
                      std::invalid_argument);
}

TEST_CASE("identity round", "[mapreduce]") {
    const auto parts = partition(iota_set(9), 3, PartitionRule::Contiguous, 0);
    auto [outputs, record] = run_round(
        "identity", parts, ExecMode::Sequential,
        [](std::size_t, const IndexSet& part, CostCounter&) { return part; });
    REQUIRE(outputs == parts);
    REQUIRE(record.machine_count() == 3);
    REQUIRE(record.max_distance_evals == 0);
    REQUIRE(record.sum_distance_evals == 0);
    REQUIRE(record.label == "identity");
}

TEST_CASE("per-part greedy reducers", "[mapreduce]") {
    PointSet ps({0, 1, 2, 10, 11, 12}, 1);
    const auto parts = partition(all_indices(6), 2, PartitionRule::Contiguous, 0);
    auto [outputs, record] = run_round(
        "gon-k2", parts, ExecMode::Sequential,
        [&](std::size_t, const IndexSet& part, CostCounter& counter) {
            GonConfig cfg;
            cfg.k = 2;
            return gon_run(ps, part, cfg, counter).centers;
        });
    REQUIRE(outputs[0] == IndexSet{0, 2});
    REQUIRE(outputs[1] == IndexSet{3, 5});
    REQUIRE(record.max_distance_evals == 6);  // k * |part| on each machine
    REQUIRE(record.sum_distance_evals == 12);
}

TEST_CASE("execution modes produce identical outputs", "[mapreduce]") {
    // a reducer that mixes per-machine seeded randomness with distance work
    PointSet ps([] {
        Rng rng(3);
        std::vector<double> coords(400);
        for (double& v : coords) v = rng.uniform();
        return coords;
    }(), 2);

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto parts = partition(all_indices(ps.size()), 7, PartitionRule::SeededShuffle, seed);
        auto reducer = [&](std::size_t machine, const IndexSet& part, CostCounter& counter) {
            Rng rng(machine_seed(seed, 0, machine));
            double acc = 0.0;
            for (PointIndex x : part)
                acc += distance(ps, x, rng.uniform_index(ps.size()), counter);
            return acc;
        };
        auto [seq_out, seq_rec] = run_round("mode", parts, ExecMode::Sequential, reducer);
        auto [par_out, par_rec] = run_round("mode", parts, ExecMode::ParallelThreads, reducer);
        REQUIRE(seq_out == par_out);
        REQUIRE(seq_rec.max_distance_evals == par_rec.max_distance_evals);
        REQUIRE(seq_rec.sum_distance_evals == par_rec.sum_distance_evals);
    }
}

TEST_CASE("round cost is the max over machines", "[mapreduce]") {
    const std::vector<IndexSet> parts{{0}, {1, 2}, {3, 4, 5}};
    auto [outputs, record] = run_round(
        "costs", parts, ExecMode::Sequential,
        [](std::size_t, const IndexSet& part, CostCounter& counter) {
            counter.distance_evals += 10 * part.size();
            return part.size();
        });
    REQUIRE(record.max_distance_evals == 30);
    REQUIRE(record.sum_distance_evals == 60);
    REQUIRE(record.machine_costs.size() == 3);
}

TEST_CASE("reducer failure reports the part index", "[mapreduce]") {
    const std::vector<IndexSet> parts{{0}, {1}, {2}};
    auto boom = [](std::size_t machine, const IndexSet&, CostCounter&) -> int {
        if (machine == 2) throw std::runtime_error("boom");
        return 0;
    };
    for (auto mode : {ExecMode::Sequential, ExecMode::ParallelThreads}) {
        REQUIRE_THROWS_WITH(run_round("fail", parts, mode, boom),
                            Catch::Matchers::ContainsSubstring("part 2"));
    }
}

TEST_CASE("trace csv serialization", "[mapreduce]") {
    MrTrace trace;
    RoundRecord r;
    r.label = "round-1";
    r.machine_costs = {CostCounter{5, 100}, CostCounter{9, 80}};
    r.finish();
    trace.rounds.push_back(r);

    REQUIRE(trace.makespan_distance_evals() == 9);
    REQUIRE(trace.total_distance_evals() == 14);

    std::ostringstream out;
    write_trace_csv(out, trace);
    REQUIRE(out.str() ==
            "round_label,machine_count,max_distance_evals,max_wall_nanos,sum_distance_evals\n"
            "round-1,2,9,100,14\n");
}
