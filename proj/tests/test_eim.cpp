#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "kcenter/datagen.hpp"
#include "kcenter/eim.hpp"
#include "kcenter/oracle.hpp"

using namespace kcenter;

namespace {

PointSet unif_set(std::uint64_t seed, std::size_t n) {
    GenSpec g;
    g.kind = GenSpec::Kind::Unif;
    g.n = n;
    g.dim = 2;
    g.side = 100.0;
    g.seed = seed;
    return gen_unif(g);
}

EimConfig config(std::size_t k, std::uint64_t seed, double phi = 8.0) {
    EimConfig cfg;
    cfg.k = k;
    cfg.phi = phi;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("pivot selection rank and ordering", "[eim]") {
    // one sample point at 0, pool points at 10, 20, ..., 100
    std::vector<double> coords{0};
    for (int i = 1; i <= 10; ++i) coords.push_back(10.0 * i);
    PointSet ps(std::move(coords), 1);
    const IndexSet sample{0};
    IndexSet pool;
    for (PointIndex i = 1; i <= 10; ++i) pool.push_back(i);

    CostCounter counter;

    SECTION("natural log: rank ceil(ln 100) = 5 means 5th farthest") {
        double sq = 0.0;
        const PointIndex v = select(ps, pool, sample, 1.0, 100, counter, 0.0, &sq);
        REQUIRE(v == 6);  // coordinate 60
        REQUIRE(sq == 60.0 * 60.0);
        REQUIRE(counter.distance_evals == 10);
    }

    SECTION("default base 2: rank ceil(log2 100) = 7 means 7th farthest") {
        REQUIRE(select(ps, pool, sample, 1.0, 100, counter) == 4);  // coordinate 40
    }

    SECTION("huge phi clamps to the closest pool point") {
        REQUIRE(select(ps, pool, sample, 1e6, 100, counter) == 1);
    }

    SECTION("singleton pool") {
        const IndexSet one{7};
        REQUIRE(select(ps, one, sample, 3.0, 100, counter) == 7);
    }

    SECTION("ties go to the lowest index") {
        PointSet tied({0, 50, -50, 50}, 1);
        const IndexSet h{1, 2, 3};
        const IndexSet s{0};
        // all three pool points are at distance 50; rank 1 picks index 1
        REQUIRE(select(tied, h, s, 0.5, 2, counter) == 1);
    }

    SECTION("empty arguments rejected") {
        REQUIRE_THROWS_AS(select(ps, IndexSet{}, sample, 1.0, 100, counter),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(select(ps, pool, IndexSet{}, 1.0, 100, counter),
                          std::invalid_argument);
    }
}

TEST_CASE("config validation", "[eim]") {
    EimConfig cfg;
    cfg.k = 0;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = EimConfig{};
    cfg.eps = 1.0;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = EimConfig{};
    cfg.phi = 0.0;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = EimConfig{};
    cfg.log_base = 1.0;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.log_base = 0.0;  // natural log marker is fine
    REQUIRE_NOTHROW(cfg.validate());
}

TEST_CASE("large k: the loop never starts and the sample is everything", "[eim]") {
    PointSet ps = unif_set(3, 10000);
    EimSampleResult res = eim_sample(ps, config(100, 1));
    REQUIRE(res.iterations == 0);
    REQUIRE(res.sample_union == all_indices(10000));
    REQUIRE(res.trace.rounds.empty());
}

TEST_CASE("degenerate sampling equals the sequential greedy", "[eim]") {
    GenSpec g;
    g.kind = GenSpec::Kind::Gau;
    g.n = 10000;
    g.kprime = 25;
    g.dim = 3;
    g.seed = 5;
    PointSet ps = gen_gau(g);

    EimResult res = eim(ps, config(100, 9));
    REQUIRE(res.iterations == 0);

    CostCounter counter;
    GonConfig gc;
    gc.k = 100;
    const CenterSolution plain = gon(ps, gc, counter);
    REQUIRE(res.solution.centers == plain.centers);
    REQUIRE(res.solution.radius == plain.radius);
}

TEST_CASE("all-duplicate input terminates immediately", "[eim]") {
    PointSet ps(std::vector<double>(1500, 4.25), 1);
    EimResult res = eim(ps, config(1, 7));
    REQUIRE(res.iterations >= 1);
    REQUIRE(res.iterations <= 2);
    REQUIRE(res.solution.radius == 0.0);
}

TEST_CASE("strict progress and sample/remainder disjointness", "[eim]") {
    PointSet ps = unif_set(11, 2500);

    std::size_t prev_remaining = ps.size();
    std::size_t iterations_seen = 0;
    auto observer = [&](const EimState& state) {
        ++iterations_seen;
        REQUIRE(state.iteration == iterations_seen);
        REQUIRE(state.remaining.size() < prev_remaining);
        prev_remaining = state.remaining.size();

        IndexSet s = state.sample;
        std::sort(s.begin(), s.end());
        for (PointIndex r : state.remaining)
            REQUIRE_FALSE(std::binary_search(s.begin(), s.end(), r));
    };

    EimSampleResult res = eim_sample(ps, config(1, 2), MrOptions{}, observer);
    REQUIRE(res.iterations == iterations_seen);
    REQUIRE(res.iterations >= 1);

    // |R| history matches and strictly decreases
    for (std::size_t i = 1; i < res.remaining_history.size(); ++i)
        REQUIRE(res.remaining_history[i] < res.remaining_history[i - 1]);

    // C = S + R with no duplicates
    IndexSet c = res.sample_union;
    REQUIRE(std::adjacent_find(c.begin(), c.end()) == c.end());
    REQUIRE(c.size() == res.sample_size + res.remaining_history.back());
}

TEST_CASE("pool size concentrates near its expectation", "[eim]") {
    double total = 0.0;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        PointSet ps = unif_set(100 + seed, 2500);
        EimSampleResult res = eim_sample(ps, config(1, seed));
        for (std::size_t h : res.pool_history) {
            total += static_cast<double>(h);
            ++count;
        }
    }
    REQUIRE(count > 0);
    const double mean = total / static_cast<double>(count);
    const double reference = 4.0 * std::pow(2500.0, 0.1) * std::log(2500.0);
    REQUIRE(mean >= 0.5 * reference);
    REQUIRE(mean <= 2.0 * reference);
}

TEST_CASE("returned sample covers the set within 5 OPT almost always", "[eim]") {
    int ok = 0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        PointSet ps = unif_set(500 + t, 2000);
        const double opt = exact_kcenter(ps, 1).opt_radius;
        EimSampleResult res = eim_sample(ps, config(1, 900 + t));
        if (covering_radius(ps, res.sample_union) <= 5.0 * opt) ++ok;
    }
    REQUIRE(ok >= trials * 95 / 100);
}

TEST_CASE("removal rounds dominate selection rounds", "[eim]") {
    PointSet ps = unif_set(21, 5000);
    EimResult res = eim(ps, config(2, 3));
    REQUIRE(res.iterations >= 1);
    REQUIRE(res.trace.round_evals("eim-remove") > res.trace.round_evals("eim-select"));
}

TEST_CASE("round machine counts follow the derived formulas", "[eim]") {
    const std::size_t n = 5000;
    PointSet ps = unif_set(33, n);
    EimConfig cfg = config(2, 4);
    EimResult res = eim(ps, cfg);
    REQUIRE(res.iterations >= 1);

    // first iteration: draw over ceil(n / n^eps) machines, removal over
    // ceil(n^(1-eps)) machines, selection on one
    REQUIRE(res.trace.rounds[0].machine_count() == cfg.sampling_machines(n, n));
    REQUIRE(res.trace.rounds[1].machine_count() == 1);
    REQUIRE(res.trace.rounds[2].machine_count() == cfg.removal_machines(n));
    REQUIRE(res.trace.rounds[0].machine_count() ==
            static_cast<std::size_t>(std::ceil(n / std::pow(n, 0.1))));

    // sampling rounds do no distance work
    REQUIRE(res.trace.rounds[0].sum_distance_evals == 0);
    // trace is 3 rounds per iteration plus the final pass
    REQUIRE(res.trace.rounds.size() == 3 * res.iterations + 1);
    REQUIRE(res.trace.rounds.back().label == "eim-final");
}

TEST_CASE("phi feasibility inequality", "[eim]") {
    REQUIRE(phi_feasible(8.0, 5.0, 0.0));
    REQUIRE_FALSE(phi_feasible(1.0, 5.0, 0.0));
    REQUIRE(phi_feasible(8.0, 1e12, 0.0));  // huge b drives the left side to 0

    SECTION("spot values at b=5, gamma=0") {
        // phi = 8: lhs = (9 + sqrt(17))/5, rhs = 8.5 - sqrt(16.25)
        const double lhs8 = (8.0 + 1.0 + std::sqrt(17.0)) / 5.0;
        const double rhs8 = 8.5 - std::sqrt(16.25);
        REQUIRE(lhs8 == Catch::Approx(2.6246).margin(1e-4));
        REQUIRE(rhs8 == Catch::Approx(4.4689).margin(1e-4));
        // phi = 1: rhs is exactly 0
        REQUIRE(1.0 + 0.5 - std::sqrt(2.0 + 0.25) == 0.0);
    }

    SECTION("critical phi sits below the conventional threshold") {
        const double crit = phi_critical(5.0, 0.0);
        REQUIRE(crit > 3.9);
        REQUIRE(crit < 4.0);
        REQUIRE(crit < kPhiSafeThreshold);
        REQUIRE(phi_feasible(kPhiSafeThreshold, 5.0, 0.0));
    }

    SECTION("argument validation") {
        REQUIRE_THROWS_AS(phi_feasible(1.0, 0.0, 0.0), std::invalid_argument);
        REQUIRE_THROWS_AS(phi_feasible(1.0, 5.0, -0.1), std::invalid_argument);
    }
}

TEST_CASE("smaller phi removes more per iteration", "[eim]") {
    PointSet ps = unif_set(41, 5000);
    EimSampleResult strict = eim_sample(ps, config(1, 6, 8.0));
    EimSampleResult eager = eim_sample(ps, config(1, 6, 1.0));
    REQUIRE(eager.remaining_history.front() < strict.remaining_history.front());
    REQUIRE(eager.iterations <= strict.iterations);
}
