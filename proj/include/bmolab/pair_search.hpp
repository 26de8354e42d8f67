#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bmolab/decomposition.hpp"
#include "bmolab/grid.hpp"

namespace bmolab {

/// A (tau, s) pair with its provenance.
struct JsPair {
    QuadReal tau;
    QuadReal s;
    enum class Provenance { Certified, EmpiricalLowerBound } provenance = Provenance::Certified;

    JsPair() = default;
    JsPair(QuadReal t, QuadReal s_, Provenance p) : tau(t), s(s_), provenance(p) {
        if (!(s <= QuadReal(Rational(1, 2)))) throw Error("s can never exceed 1/2");
    }
};

struct BestRegionResult {
    Region region;
    Rational score;  // min{lambda(E+ cap W), lambda(E- cap W)} / lambda(W)
};

/// Exact maximization of the balanced fraction over the region collection.
/// Ties prefer larger regions, then earlier enumeration order.
BestRegionResult best_balanced_region(const CellSet& eplus, const CellSet& eminus,
                                      CollectionKind kind, int refine = 0);

enum class SearchStrategy { Exhaustive, Anneal };

struct SearchConfig {
    QuadReal tau;
    int dim = 1;
    int level = 1;
    int refine = 0;
    CollectionKind kind = CollectionKind::DyadicCubes;
    SearchStrategy strategy = SearchStrategy::Exhaustive;
    unsigned long long budget = 1'000'000;
    uint64_t seed = 0;
    int workers = 1;
    bool strict_feasibility = true;  // eq. (isms) strict by default
    int anneal_chains = 8;
    std::string checkpoint_path;     // empty: no checkpointing
    unsigned long long checkpoint_every = 1 << 16;
};

/// One shard of an exhaustive sweep or one annealing chain.
struct BatchSummary {
    unsigned long long begin = 0, end = 0;  // config range, or chain id twice
    unsigned long long examined = 0;
    unsigned long long feasible = 0;
    bool has_min = false;
    Rational min_score;
};

struct SearchReport {
    SearchConfig config;
    unsigned long long configurations_examined = 0;
    unsigned long long feasible_count = 0;
    Rational s_hat;          // min over feasible configs of the best score
    bool vacuous = false;    // no feasible configuration: s_hat = 1/2 ceiling
    std::string worst_eplus_hex;
    std::string worst_eminus_hex;
    unsigned long long worst_config_index = 0;
    std::vector<BatchSummary> batches;  // one row per shard/chain
    double wall_seconds = 0.0;  // excluded from determinism comparisons
};

/// Frontier estimate s_hat(tau, d, L): minimum over admissible {E+,E-,G}
/// cell assignments of the best balanced-region score. Exhaustive mode is
/// deterministic and shard-parallel; anneal reports an upper bound from a
/// fixed number of seeded chains (independent of the worker count).
SearchReport frontier_search(const SearchConfig& config);

/// Resume a checkpointed exhaustive search; returns the finished report.
SearchReport frontier_search_resume(const SearchConfig& config);

/// Per-cube classification against Definition of good/exceptional/minimal.
struct MinimalityReport {
    Region cube;
    bool good = false;
    bool exceptional = false;
    bool minimal = false;
    Rational meas_plus;      // lambda(F+ cap V)
    Rational meas_minus;     // lambda(F- cap V)
    Rational tau_gap;        // tau' * lambda(V \ F+ \ F-)
    Rational equality_defect;  // |lambda(F+ cap V) - lambda(F- cap V)|
    std::optional<Region> witness;          // smaller good/exceptional cube
    std::optional<Region> balancing_cube;   // for exceptional cubes
    std::optional<Rational> balancing_fraction;
    bool fap_within_tolerance = false;  // |min - tau' gap| at minimality
};

/// Classifies Q0 for the pair (F+, F-); when good but not minimal returns a
/// strictly smaller good or exceptional grid cube as witness.
MinimalityReport minimality_scan(const CellSet& fplus, const CellSet& fminus, const Rational& tau_prime,
                                 int refine = 0,
                                 const std::optional<Region>& cube = std::nullopt);

struct QuestionBRow {
    int trial = 0;
    Region minimal_cube;
    Rational defect;
    bool ended_exceptional = false;
};

struct QuestionBReport {
    int dim = 1;
    int level = 0;
    Rational tau_prime;
    uint64_t seed = 0;
    std::vector<QuestionBRow> rows;
    Rational max_defect;
    Rational implied_s;  // 1/(2 + 1/tau') when Question B holds
};

/// Random rectangle-union pairs descended to grid-minimal cubes; defects
/// are asserted small for d = 1 by the caller and reported as evidence for
/// d >= 2.
QuestionBReport question_b_experiment(int dim, int level, const Rational& tau_prime, int trials,
                                      uint64_t seed);

}  // namespace bmolab
