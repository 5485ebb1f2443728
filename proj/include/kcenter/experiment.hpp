#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcenter/core.hpp"
#include "kcenter/datagen.hpp"
#include "kcenter/eim.hpp"
#include "kcenter/gonzalez.hpp"
#include "kcenter/mapreduce.hpp"
#include "kcenter/mrg.hpp"

namespace kcenter {

enum class Algo { Gon, Mrg, Eim };

inline const char* algo_name(Algo a) {
    switch (a) {
        case Algo::Gon: return "gon";
        case Algo::Mrg: return "mrg";
        case Algo::Eim: return "eim";
    }
    return "?";
}

/// One declarative experiment: a dataset, an algorithm, and its knobs.
/// The defaults follow the standard benchmark setup: 50 machines,
/// eps = 0.1, phi = 8.
struct ExperimentSpec {
    std::string input_path;        // CSV file; empty when gen is set
    std::optional<GenSpec> gen;    // synthetic dataset

    Algo algo = Algo::Gon;
    std::vector<std::size_t> ks{1};  // single k or a sweep
    std::size_t machines = 50;
    std::size_t capacity = 0;  // 0 = auto: max(ceil(n/m), k*m)
    double eps = 0.1;
    double phi = 8.0;
    double log_base = 2.0;  // eim only; 0 = natural
    std::size_t repeats = 1;
    std::uint64_t seed = 0;
    ExecMode mode = ExecMode::Sequential;
    PartitionRule rule = PartitionRule::Contiguous;

    void validate() const {
        if (input_path.empty() == !gen.has_value())
            throw std::invalid_argument("experiment: give exactly one of an input file or a generator spec");
        if (ks.empty()) throw std::invalid_argument("experiment: no k values");
        for (std::size_t k : ks)
            if (k < 1) throw std::invalid_argument("experiment: k must be >= 1");
        if (repeats < 1) throw std::invalid_argument("experiment: repeats must be >= 1");
        if (machines < 1) throw std::invalid_argument("experiment: m must be >= 1");
    }
};

/// One result line. Count columns are exact integers stored as doubles so
/// averaged summary rows (seed = "avg") can share the type.
struct ResultRow {
    std::string algo;
    std::size_t n = 0;
    std::size_t dim = 0;
    std::size_t k = 0;
    std::size_t m = 0;
    double eps = 0.0;
    double phi = 0.0;
    std::string seed;  // decimal run seed, or "avg" for the summary row
    double radius = 0.0;
    double rounds = 0.0;
    double iterations = 0.0;
    double max_machine_distance_evals = 0.0;
    double max_machine_wall_nanos = 0.0;
    double total_distance_evals = 0.0;
};

inline PointSet ingest_csv(const std::string& path) { return load_points_csv(path); }

inline PointSet load_dataset(const ExperimentSpec& spec) {
    if (spec.gen) return generate(*spec.gen);
    return ingest_csv(spec.input_path);
}

inline std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const PointSet ps = load_dataset(spec);
    const std::size_t n = ps.size();

    std::vector<ResultRow> rows;
    for (std::size_t k : spec.ks) {
        ResultRow avg;
        for (std::size_t rep = 0; rep < spec.repeats; ++rep) {
            const std::uint64_t run_seed = spec.seed + rep;
            ResultRow row;
            row.algo = algo_name(spec.algo);
            row.n = n;
            row.dim = ps.dim();
            row.k = k;
            row.m = spec.algo == Algo::Gon ? 1 : spec.machines;
            row.eps = spec.eps;
            row.phi = spec.phi;
            row.seed = std::to_string(run_seed);

            switch (spec.algo) {
                case Algo::Gon: {
                    GonConfig gc;
                    gc.k = k;
                    gc.seed = run_seed;
                    CostCounter counter;
                    const auto t0 = std::chrono::steady_clock::now();
                    const CenterSolution sol = gon(ps, gc, counter);
                    const auto t1 = std::chrono::steady_clock::now();
                    const double wall = static_cast<double>(
                        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
                    row.radius = sol.radius;
                    row.rounds = 1;
                    row.iterations = 0;
                    row.max_machine_distance_evals = static_cast<double>(counter.distance_evals);
                    row.max_machine_wall_nanos = wall;
                    row.total_distance_evals = static_cast<double>(counter.distance_evals);
                    break;
                }
                case Algo::Mrg: {
                    MrConfig mc;
                    mc.machines = spec.machines;
                    mc.capacity = spec.capacity != 0
                                      ? spec.capacity
                                      : std::max((n + spec.machines - 1) / spec.machines,
                                                 k * spec.machines);
                    mc.mode = spec.mode;
                    mc.rule = spec.rule;
                    const MrgResult res = mrg(ps, k, mc, run_seed);
                    row.radius = res.solution.radius;
                    row.rounds = static_cast<double>(res.rounds_used);
                    row.iterations = static_cast<double>(res.while_iterations);
                    row.max_machine_distance_evals =
                        static_cast<double>(res.trace.makespan_distance_evals());
                    row.max_machine_wall_nanos =
                        static_cast<double>(res.trace.makespan_wall_nanos());
                    row.total_distance_evals =
                        static_cast<double>(res.trace.total_distance_evals());
                    break;
                }
                case Algo::Eim: {
                    EimConfig ec;
                    ec.k = k;
                    ec.eps = spec.eps;
                    ec.phi = spec.phi;
                    ec.log_base = spec.log_base;
                    ec.seed = run_seed;
                    MrOptions opts{spec.mode, spec.rule};
                    const EimResult res = eim(ps, ec, opts);
                    row.radius = res.solution.radius;
                    row.rounds = static_cast<double>(res.trace.rounds.size());
                    row.iterations = static_cast<double>(res.iterations);
                    row.max_machine_distance_evals =
                        static_cast<double>(res.trace.makespan_distance_evals());
                    row.max_machine_wall_nanos =
                        static_cast<double>(res.trace.makespan_wall_nanos());
                    row.total_distance_evals =
                        static_cast<double>(res.trace.total_distance_evals());
                    break;
                }
            }

            avg.radius += row.radius;
            avg.rounds += row.rounds;
            avg.iterations += row.iterations;
            avg.max_machine_distance_evals += row.max_machine_distance_evals;
            avg.max_machine_wall_nanos += row.max_machine_wall_nanos;
            avg.total_distance_evals += row.total_distance_evals;
            rows.push_back(std::move(row));
        }

        const double reps = static_cast<double>(spec.repeats);
        avg.algo = algo_name(spec.algo);
        avg.n = n;
        avg.dim = ps.dim();
        avg.k = k;
        avg.m = spec.algo == Algo::Gon ? 1 : spec.machines;
        avg.eps = spec.eps;
        avg.phi = spec.phi;
        avg.seed = "avg";
        avg.radius /= reps;
        avg.rounds /= reps;
        avg.iterations /= reps;
        avg.max_machine_distance_evals /= reps;
        avg.max_machine_wall_nanos /= reps;
        avg.total_distance_evals /= reps;
        rows.push_back(std::move(avg));
    }
    return rows;
}

inline void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << "algo,n,dim,k,m,eps,phi,seed,radius,rounds,iterations,"
           "max_machine_distance_evals,max_machine_wall_nanos,total_distance_evals\n";
    std::string line;
    for (const ResultRow& r : rows) {
        line.clear();
        line += r.algo;
        line += ',' + std::to_string(r.n) + ',' + std::to_string(r.dim) + ',' +
                std::to_string(r.k) + ',' + std::to_string(r.m) + ',';
        format_double(line, r.eps);
        line += ',';
        format_double(line, r.phi);
        line += ',' + r.seed + ',';
        format_double(line, r.radius);
        line += ',';
        format_double(line, r.rounds);
        line += ',';
        format_double(line, r.iterations);
        line += ',';
        format_double(line, r.max_machine_distance_evals);
        line += ',';
        format_double(line, r.max_machine_wall_nanos);
        line += ',';
        format_double(line, r.total_distance_evals);
        line += '\n';
        out << line;
    }
}

}  // namespace kcenter
