// Experiment front-end: dataset generation and ingestion, single runs and
// k/phi sweeps, CSV reporting.
//
//   kcenter gen    --gen gau:100000:25:3:100:0.1 --seed 1 --out points.csv
//   kcenter oracle --in points.csv --k 2
//   kcenter run    --algo mrg --in points.csv --sweep k=2,5,10,25 --m 50 --out results.csv

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kcenter/kcenter.hpp"

namespace {

using namespace kcenter;

GenSpec parse_gen_spec(const std::string& text, std::uint64_t seed) {
    std::vector<std::string> fields;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ':')) fields.push_back(field);
    if (fields.size() < 2)
        throw CLI::ValidationError("--gen", "expected kind:n[:kprime[:dim[:side[:sigma]]]]");

    GenSpec spec;
    if (fields[0] == "unif")
        spec.kind = GenSpec::Kind::Unif;
    else if (fields[0] == "gau")
        spec.kind = GenSpec::Kind::Gau;
    else if (fields[0] == "unb")
        spec.kind = GenSpec::Kind::UnB;
    else
        throw CLI::ValidationError("--gen", "kind must be unif, gau or unb");

    auto num = [&](std::size_t i, double dflt) {
        if (i >= fields.size() || fields[i].empty()) return dflt;
        return std::stod(fields[i]);
    };
    spec.n = static_cast<std::size_t>(num(1, 1));
    spec.kprime = static_cast<std::size_t>(num(2, 1));
    spec.dim = static_cast<std::size_t>(num(3, spec.kind == GenSpec::Kind::Unif ? 2 : 3));
    spec.side = num(4, 100.0);
    spec.sigma = num(5, 0.1);
    spec.seed = seed;
    spec.validate();
    return spec;
}

std::vector<std::size_t> parse_sweep(const std::string& text) {
    std::string body = text;
    if (body.rfind("k=", 0) == 0) body = body.substr(2);
    std::vector<std::size_t> ks;
    std::stringstream ss(body);
    std::string field;
    while (std::getline(ss, field, ',')) {
        if (field.empty()) continue;
        ks.push_back(static_cast<std::size_t>(std::stoull(field)));
    }
    if (ks.empty()) throw CLI::ValidationError("--sweep", "no k values");
    return ks;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
    return file;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-center clustering experiments on a simulated MapReduce cluster"};
    app.require_subcommand(1);

    // --- gen -----------------------------------------------------------
    std::string gen_spec_text;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    auto* gen_cmd = app.add_subcommand("gen", "write a synthetic dataset as CSV points");
    gen_cmd->add_option("--gen", gen_spec_text, "kind:n:kprime:dim:side:sigma")->required();
    gen_cmd->add_option("--seed", gen_seed, "generator seed");
    gen_cmd->add_option("--out", gen_out, "output file (default stdout)");

    // --- oracle ---------------------------------------------------------
    std::string oracle_in;
    std::size_t oracle_k = 1;
    double oracle_budget = 1e7;
    auto* oracle_cmd =
        app.add_subcommand("oracle", "exact brute-force optimum for small instances");
    oracle_cmd->add_option("--in", oracle_in, "CSV point file")->required();
    oracle_cmd->add_option("--k", oracle_k, "number of centers")->required();
    oracle_cmd->add_option("--budget", oracle_budget, "max candidate sets to enumerate");

    // --- run -------------------------------------------------------------
    ExperimentSpec spec;
    std::string run_algo = "gon";
    std::string run_gen, run_in, run_sweep, run_out, run_trace;
    std::string run_mode = "seq", run_partition = "contiguous";
    std::size_t run_k = 0;
    auto* run_cmd = app.add_subcommand("run", "run an algorithm and report CSV rows");
    run_cmd->add_option("--algo", run_algo, "gon | mrg | eim")->required();
    run_cmd->add_option("--k", run_k, "number of centers");
    run_cmd->add_option("--sweep", run_sweep, "comma list of k values, e.g. k=2,5,10,25,50,100");
    run_cmd->add_option("--m", spec.machines, "simulated machine count (default 50)");
    run_cmd->add_option("--c", spec.capacity,
                        "machine capacity for mrg (default max(ceil(n/m), k*m))");
    run_cmd->add_option("--eps", spec.eps, "eim sampling exponent (default 0.1)");
    run_cmd->add_option("--phi", spec.phi, "eim pivot rank multiplier (default 8)");
    run_cmd->add_option("--logbase", spec.log_base, "eim log base (default 2, 0 = natural)");
    run_cmd->add_option("--seed", spec.seed, "base seed; repeat r uses seed+r");
    run_cmd->add_option("--repeats", spec.repeats, "runs per k (default 1)");
    run_cmd->add_option("--gen", run_gen, "synthetic dataset, kind:n:kprime:dim:side:sigma");
    run_cmd->add_option("--in", run_in, "CSV point file");
    run_cmd->add_option("--out", run_out, "result CSV file (default stdout)");
    run_cmd->add_option("--trace", run_trace, "write the last run's round trace CSV here");
    run_cmd->add_option("--mode", run_mode, "seq | par (reducer execution)");
    run_cmd->add_option("--partition", run_partition, "contiguous | roundrobin | shuffle");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed()) {
            const GenSpec g = parse_gen_spec(gen_spec_text, gen_seed);
            const PointSet ps = generate(g);
            std::ofstream file;
            std::ostream& out = open_output(file, gen_out);
            write_points_csv(out, ps, g.to_string() + " seed=" + std::to_string(gen_seed));
            return 0;
        }

        if (oracle_cmd->parsed()) {
            const PointSet ps = ingest_csv(oracle_in);
            const OracleResult res = exact_kcenter(ps, oracle_k, oracle_budget);
            std::cout << "opt_radius " << res.opt_radius << "\ncenters";
            for (PointIndex c : res.opt_centers) std::cout << ' ' << c;
            std::cout << "\nenumerated " << res.enumerated << '\n';
            return 0;
        }

        // run
        if (run_algo == "gon")
            spec.algo = Algo::Gon;
        else if (run_algo == "mrg")
            spec.algo = Algo::Mrg;
        else if (run_algo == "eim")
            spec.algo = Algo::Eim;
        else
            throw std::runtime_error("--algo must be gon, mrg or eim");

        if (run_mode == "seq")
            spec.mode = ExecMode::Sequential;
        else if (run_mode == "par")
            spec.mode = ExecMode::ParallelThreads;
        else
            throw std::runtime_error("--mode must be seq or par");

        if (run_partition == "contiguous")
            spec.rule = PartitionRule::Contiguous;
        else if (run_partition == "roundrobin")
            spec.rule = PartitionRule::RoundRobin;
        else if (run_partition == "shuffle")
            spec.rule = PartitionRule::SeededShuffle;
        else
            throw std::runtime_error("--partition must be contiguous, roundrobin or shuffle");

        if (!run_sweep.empty())
            spec.ks = parse_sweep(run_sweep);
        else if (run_k > 0)
            spec.ks = {run_k};
        else
            throw std::runtime_error("give --k or --sweep");

        if (!run_gen.empty()) spec.gen = parse_gen_spec(run_gen, spec.seed);
        spec.input_path = run_in;

        const std::vector<ResultRow> rows = run_experiment(spec);
        std::ofstream file;
        std::ostream& out = open_output(file, run_out);
        write_results_csv(out, rows);

        if (!run_trace.empty()) {
            // rerun the last configuration once to emit its round trace
            const PointSet ps = load_dataset(spec);
            const std::size_t k = spec.ks.back();
            const std::uint64_t run_seed = spec.seed + spec.repeats - 1;
            MrTrace trace;
            if (spec.algo == Algo::Mrg) {
                MrConfig mc;
                mc.machines = spec.machines;
                mc.capacity = spec.capacity != 0
                                  ? spec.capacity
                                  : std::max((ps.size() + spec.machines - 1) / spec.machines,
                                             k * spec.machines);
                mc.mode = spec.mode;
                mc.rule = spec.rule;
                trace = mrg(ps, k, mc, run_seed).trace;
            } else if (spec.algo == Algo::Eim) {
                EimConfig ec;
                ec.k = k;
                ec.eps = spec.eps;
                ec.phi = spec.phi;
                ec.log_base = spec.log_base;
                ec.seed = run_seed;
                trace = eim(ps, ec, MrOptions{spec.mode, spec.rule}).trace;
            } else {
                throw std::runtime_error("--trace applies to mrg and eim only");
            }
            std::ofstream tf(run_trace);
            if (!tf) throw std::runtime_error("cannot open trace file '" + run_trace + "'");
            write_trace_csv(tf, trace);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
