#include <doctest.h>

#include <random>

#include "bmolab/io.hpp"
#include "bmolab/pair_search.hpp"

using namespace bmolab;

namespace {

CellSet interval_cells(const GridSpec& spec, long long lo, long long hi) {
    CellSet s(spec);
    for (long long c = lo; c < hi; ++c) s.insert(c);
    return s;
}

// Naive independent re-implementation of the balanced-region maximum.
Rational oracle_best_score(const CellSet& plus, const CellSet& minus, CollectionKind kind,
                           int refine) {
    Rational best(-1);
    for (const Region& r : enumerate_regions(kind, plus.spec(), refine)) {
        Rational p(0), m(0);
        for (long long cell : r.touched_cells(plus.spec())) {
            Rational w = r.cell_overlap(plus.spec(), cell);
            if (plus.contains(cell)) p += w;
            if (minus.contains(cell)) m += w;
        }
        Rational score = std::min(p, m) / r.measure();
        if (score > best) best = score;
    }
    return best;
}

}  // namespace

TEST_CASE("best balanced region on canonical configurations") {
    GridSpec spec(1, 2);
    // complementary halves: score 1/2 on the whole cube
    BestRegionResult r =
        best_balanced_region(interval_cells(spec, 0, 2), interval_cells(spec, 2, 4),
                             CollectionKind::Cubes);
    CHECK(r.score == Rational(1, 2));

    // two adjacent cells: their union scores 1/2
    CellSet p(spec), m(spec);
    p.insert(1);
    m.insert(2);
    BestRegionResult r2 = best_balanced_region(p, m, CollectionKind::Cubes);
    CHECK(r2.score == Rational(1, 2));
    CHECK(r2.region.measure() == Rational(1, 2));
}

TEST_CASE("score ties prefer the larger region") {
    // complementary halves: every symmetric straddling interval scores 1/2,
    // so the whole cube wins the tie
    GridSpec spec(1, 2);
    BestRegionResult r =
        best_balanced_region(interval_cells(spec, 0, 2), interval_cells(spec, 2, 4),
                             CollectionKind::Intervals);
    CHECK(r.score == Rational(1, 2));
    CHECK(r.region.measure() == Rational(1));
}

TEST_CASE("best balanced region matches the naive oracle on random pairs") {
    std::mt19937_64 rng(83);
    GridSpec spec(2, 2);
    for (int iter = 0; iter < 25; ++iter) {
        CellSet p(spec), m(spec);
        for (long long c = 0; c < spec.cell_count(); ++c) {
            switch (rng() % 3) {
                case 0: p.insert(c); break;
                case 1: m.insert(c); break;
                default: break;
            }
        }
        if (p.empty() || m.empty()) continue;
        for (int refine : {0, 1}) {
            BestRegionResult got = best_balanced_region(p, m, CollectionKind::Cubes, refine);
            CHECK(got.score == oracle_best_score(p, m, CollectionKind::Cubes, refine));
        }
    }
}

TEST_CASE("degenerate inputs are rejected") {
    GridSpec spec(1, 1);
    CellSet p(spec), m(spec);
    p.insert(0);
    CHECK_THROWS_AS(best_balanced_region(p, m, CollectionKind::Cubes), DegenerateSet);
    m.insert(0);
    CHECK_THROWS(best_balanced_region(p, m, CollectionKind::Cubes));
}

TEST_CASE("exhaustive frontier search at d=1 L=2 visits all 81 configurations") {
    SearchConfig cfg;
    cfg.tau = tau_sqrt2_minus_1();
    cfg.dim = 1;
    cfg.level = 2;
    cfg.kind = CollectionKind::Intervals;
    cfg.budget = 1000;
    SearchReport rep = frontier_search(cfg);
    CHECK(rep.configurations_examined == 81);
    CHECK_FALSE(rep.vacuous);
    CHECK(rep.feasible_count > 0);

    // frontier consistency: s_hat dominates the certified constant, and
    // every feasible configuration's certificate region scores at least s.
    QuadReal cert_s = certified_pair(1, CollectionKind::Cubes).s;
    CHECK(QuadReal(rep.s_hat) >= cert_s);

    GridSpec spec(1, 2);
    for (unsigned long long idx = 0; idx < 81; ++idx) {
        CellSet p(spec), m(spec), g(spec);
        unsigned long long v = idx;
        for (long long c = 0; c < 4; ++c) {
            (v % 3 == 0 ? p : v % 3 == 1 ? m : g).insert(c);
            v /= 3;
        }
        if (p.empty() || m.empty()) continue;
        if (!(QuadReal(std::min(p.measure(), m.measure())) >
              cfg.tau * QuadReal(g.measure())))
            continue;
        BalanceCertificate cert = chain_descent(
            TriPartition(p, m, g), DecompositionSpec{DecompositionSpec::Rule::Dyadic}, cfg.tau);
        Rational score = best_balanced_region(p, m, CollectionKind::Intervals).score;
        CHECK(score >= cert.min_fraction());
        CHECK(QuadReal(cert.min_fraction()) >= cert_s);
    }
}

TEST_CASE("frontier search is reflection invariant") {
    SearchConfig cfg;
    cfg.tau = tau_sqrt2_minus_1();
    cfg.dim = 1;
    cfg.level = 2;
    cfg.kind = CollectionKind::Intervals;
    cfg.budget = 1000;
    SearchReport rep = frontier_search(cfg);

    // reflect every configuration through the grid midpoint and rescore
    GridSpec spec(1, 2);
    Rational reflected_min(1);
    bool any = false;
    for (unsigned long long idx = 0; idx < 81; ++idx) {
        CellSet p(spec), m(spec), g(spec);
        unsigned long long v = idx;
        for (long long c = 0; c < 4; ++c) {
            long long rc = 3 - c;
            (v % 3 == 0 ? p : v % 3 == 1 ? m : g).insert(rc);
            v /= 3;
        }
        if (p.empty() || m.empty()) continue;
        if (!(QuadReal(std::min(p.measure(), m.measure())) > cfg.tau * QuadReal(g.measure())))
            continue;
        any = true;
        reflected_min =
            std::min(reflected_min, best_balanced_region(p, m, CollectionKind::Intervals).score);
    }
    REQUIRE(any);
    CHECK(reflected_min == rep.s_hat);
}

TEST_CASE("single-cell grids make the search vacuous") {
    SearchConfig cfg;
    cfg.tau = tau_sqrt2_minus_1();
    cfg.dim = 1;
    cfg.level = 0;
    cfg.budget = 10;
    cfg.kind = CollectionKind::Intervals;
    SearchReport rep = frontier_search(cfg);
    CHECK(rep.vacuous);
    CHECK(rep.s_hat == Rational(1, 2));
    CHECK(rep.feasible_count == 0);
}

TEST_CASE("budget gate throws before enumerating") {
    SearchConfig cfg;
    cfg.tau = tau_sqrt2_minus_1();
    cfg.dim = 1;
    cfg.level = 3;
    cfg.budget = 100;  // 3^8 = 6561 > 100
    CHECK_THROWS_AS(frontier_search(cfg), BudgetExceeded);
}

TEST_CASE("exhaustive search is deterministic across worker counts") {
    SearchConfig cfg;
    cfg.tau = tau_sqrt2_minus_1();
    cfg.dim = 1;
    cfg.level = 2;
    cfg.kind = CollectionKind::Intervals;
    cfg.budget = 1000;
    cfg.checkpoint_every = 7;  // multiple shards
    cfg.workers = 1;
    SearchReport one = frontier_search(cfg);
    cfg.workers = 4;
    SearchReport four = frontier_search(cfg);
    CHECK(to_json(one, false) == to_json(four, false));
}

TEST_CASE("checkpoint resume reproduces the fresh result") {
    SearchConfig cfg;
    cfg.tau = tau_sqrt2_minus_1();
    cfg.dim = 1;
    cfg.level = 2;
    cfg.kind = CollectionKind::Intervals;
    cfg.budget = 1000;
    cfg.checkpoint_every = 10;
    cfg.checkpoint_path = "frontier_ckpt_test.json";
    SearchReport fresh = frontier_search(cfg);

    // Mark some shards as unfinished and resume from the doctored file.
    ojson ck = load_json(cfg.checkpoint_path);
    for (size_t i = 0; i < ck["shards"].size(); i += 2) ck["shards"][i]["done"] = false;
    save_json(cfg.checkpoint_path, ck);
    SearchReport resumed = frontier_search_resume(cfg);
    CHECK(to_json(fresh, false) == to_json(resumed, false));
    std::remove(cfg.checkpoint_path.c_str());
}

TEST_CASE("annealing is reproducible and honors the chain structure") {
    SearchConfig cfg;
    cfg.tau = tau_sqrt2_minus_1();
    cfg.dim = 2;
    cfg.level = 2;
    cfg.kind = CollectionKind::DyadicCubes;
    cfg.strategy = SearchStrategy::Anneal;
    cfg.budget = 4000;
    cfg.seed = 12345;
    cfg.workers = 1;
    SearchReport a = frontier_search(cfg);
    cfg.workers = 3;
    SearchReport b = frontier_search(cfg);
    CHECK(to_json(a, false) == to_json(b, false));
    CHECK_FALSE(a.vacuous);
    // an upper bound can never undercut the certified constant
    CHECK(QuadReal(a.s_hat) >= certified_pair(2, CollectionKind::DyadicCubes).s);
}

TEST_CASE("minimality scan: good but not minimal interval pair") {
    GridSpec spec(1, 4);
    CellSet fplus = interval_cells(spec, 0, 4);    // [0, 1/4]
    CellSet fminus = interval_cells(spec, 12, 16); // [3/4, 1]
    MinimalityReport rep = minimality_scan(fplus, fminus, Rational(3, 10));
    CHECK(rep.good);
    CHECK_FALSE(rep.exceptional);
    CHECK_FALSE(rep.minimal);
    CHECK(rep.witness.has_value());
    CHECK(rep.meas_plus == Rational(1, 4));
    CHECK(rep.tau_gap == Rational(3, 20));  // 0.3 * 1/2 = 0.15 != 0.25
}

TEST_CASE("minimality scan: exceptional cover produces a balancing cube") {
    GridSpec spec(1, 4);
    CellSet fplus = interval_cells(spec, 0, 6);
    CellSet fminus = interval_cells(spec, 6, 16);
    MinimalityReport rep = minimality_scan(fplus, fminus, Rational(3, 10), 1);
    CHECK(rep.exceptional);
    REQUIRE(rep.balancing_cube.has_value());
    // fractions (1/2, 1/2) exactly on this instance
    CHECK(*rep.balancing_fraction == Rational(1, 2));
}

TEST_CASE("minimality scan: one-sided pairs are neither good nor exceptional") {
    GridSpec spec(1, 3);
    CellSet fplus = interval_cells(spec, 0, 2);
    MinimalityReport rep = minimality_scan(fplus, CellSet(spec), Rational(3, 10));
    CHECK_FALSE(rep.good);
    CHECK_FALSE(rep.exceptional);
    CHECK_FALSE(rep.minimal);
}

TEST_CASE("question B experiment: d=1 defects stay within one cell") {
    QuestionBReport rep = question_b_experiment(1, 5, Rational(3, 10), 30, 2024);
    CHECK(rep.rows.size() > 0);
    for (const auto& row : rep.rows)
        if (!row.ended_exceptional) CHECK(row.defect <= Rational(1, 32));
    CHECK(rep.max_defect <= Rational(1, 32));
    // implied constant s = 1/(2 + 1/tau') = 0.1875 at tau' = 0.3
    CHECK(rep.implied_s == Rational(3, 16));
}

TEST_CASE("question B experiment: d=2 runs reproducibly") {
    QuestionBReport a = question_b_experiment(2, 3, Rational(3, 10), 10, 7);
    QuestionBReport b = question_b_experiment(2, 3, Rational(3, 10), 10, 7);
    CHECK(to_json(a) == to_json(b));
}
