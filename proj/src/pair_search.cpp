#include "bmolab/pair_search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <random>
#include <thread>

#include <json.hpp>

namespace bmolab {

namespace {

using json = nlohmann::ordered_json;

struct ConfigScore {
    bool feasible = false;
    Rational score;
};

// Decode base-3 digits of `index` into the three cell sets.
void decode_config(unsigned long long index, const GridSpec& spec, CellSet& plus, CellSet& minus,
                   CellSet& gap) {
    plus = CellSet(spec);
    minus = CellSet(spec);
    gap = CellSet(spec);
    for (long long cell = 0; cell < spec.cell_count(); ++cell) {
        switch (index % 3) {
            case 0: plus.insert(cell); break;
            case 1: minus.insert(cell); break;
            default: gap.insert(cell); break;
        }
        index /= 3;
    }
}

bool feasible_config(const CellSet& plus, const CellSet& minus, const CellSet& gap,
                     const QuadReal& tau, bool strict) {
    if (plus.empty() || minus.empty()) return false;
    QuadReal lhs(std::min(plus.measure(), minus.measure()));
    QuadReal rhs = tau * QuadReal(gap.measure());
    return strict ? lhs > rhs : lhs >= rhs;
}

ConfigScore score_config(unsigned long long index, const SearchConfig& cfg, const GridSpec& spec) {
    CellSet plus, minus, gap;
    decode_config(index, spec, plus, minus, gap);
    ConfigScore out;
    out.feasible = feasible_config(plus, minus, gap, cfg.tau, cfg.strict_feasibility);
    if (out.feasible) out.score = best_balanced_region(plus, minus, cfg.kind, cfg.refine).score;
    return out;
}

struct ShardResult {
    unsigned long long begin = 0, end = 0;
    bool done = false;
    unsigned long long examined = 0;
    unsigned long long feasible = 0;
    bool has_min = false;
    Rational min_score;
    unsigned long long argmin = 0;
};

unsigned long long pow3_checked(int n, unsigned long long budget) {
    unsigned long long total = 1;
    for (int i = 0; i < n; ++i) {
        if (total > budget / 3 + 1) throw BudgetExceeded("3^" + std::to_string(n) + " exceeds budget");
        total *= 3;
    }
    if (total > budget) throw BudgetExceeded();
    return total;
}

std::string tau_to_string(const QuadReal& t) { return t.to_string(); }

json shard_to_json(const ShardResult& s) {
    json j;
    j["begin"] = s.begin;
    j["end"] = s.end;
    j["done"] = s.done;
    j["examined"] = s.examined;
    j["feasible"] = s.feasible;
    if (s.has_min) {
        j["min_score"] = s.min_score.to_fraction_string();
        j["argmin"] = s.argmin;
    }
    return j;
}

void load_shard(const json& j, ShardResult& s) {
    s.begin = j.at("begin").get<unsigned long long>();
    s.end = j.at("end").get<unsigned long long>();
    s.done = j.at("done").get<bool>();
    s.examined = j.value("examined", 0ULL);
    s.feasible = j.value("feasible", 0ULL);
    if (j.contains("min_score")) {
        s.has_min = true;
        s.min_score = parse_rational(j.at("min_score").get<std::string>());
        s.argmin = j.at("argmin").get<unsigned long long>();
    }
}

SearchReport run_exhaustive(const SearchConfig& cfg, std::vector<ShardResult> shards) {
    GridSpec spec(cfg.dim, cfg.level);
    auto t0 = std::chrono::steady_clock::now();

    std::mutex ckpt_mutex;
    auto write_checkpoint = [&] {
        if (cfg.checkpoint_path.empty()) return;
        std::lock_guard<std::mutex> lock(ckpt_mutex);
        json j;
        j["tau"] = tau_to_string(cfg.tau);
        j["dim"] = cfg.dim;
        j["level"] = cfg.level;
        j["refine"] = cfg.refine;
        j["kind"] = to_string(cfg.kind);
        j["strict"] = cfg.strict_feasibility;
        j["shards"] = json::array();
        for (const auto& s : shards) j["shards"].push_back(shard_to_json(s));
        std::ofstream out(cfg.checkpoint_path + ".tmp");
        out << j.dump(2) << "\n";
        out.close();
        std::rename((cfg.checkpoint_path + ".tmp").c_str(), cfg.checkpoint_path.c_str());
    };

    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        try {
            while (true) {
                size_t idx = next.fetch_add(1);
                if (idx >= shards.size()) break;
                ShardResult& s = shards[idx];
                if (s.done) continue;
                for (unsigned long long c = s.begin; c < s.end; ++c) {
                    ConfigScore sc = score_config(c, cfg, spec);
                    ++s.examined;
                    if (!sc.feasible) continue;
                    ++s.feasible;
                    if (!s.has_min || sc.score < s.min_score) {
                        s.has_min = true;
                        s.min_score = sc.score;
                        s.argmin = c;
                    }
                }
                s.done = true;
                write_checkpoint();
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    int workers = std::max(1, cfg.workers);
    std::vector<std::thread> pool;
    for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    // Deterministic merge in shard order; ties keep the smallest index.
    SearchReport rep;
    rep.config = cfg;
    bool has_min = false;
    Rational min_score;
    unsigned long long argmin = 0;
    for (const auto& s : shards) {
        rep.configurations_examined += s.examined;
        rep.feasible_count += s.feasible;
        rep.batches.push_back(
            {s.begin, s.end, s.examined, s.feasible, s.has_min, s.min_score});
        if (s.has_min && (!has_min || s.min_score < min_score ||
                          (s.min_score == min_score && s.argmin < argmin))) {
            has_min = true;
            min_score = s.min_score;
            argmin = s.argmin;
        }
    }
    if (!has_min) {
        rep.vacuous = true;
        rep.s_hat = Rational(1, 2);  // universal ceiling, flagged vacuous
    } else {
        rep.s_hat = min_score;
        rep.worst_config_index = argmin;
        CellSet plus, minus, gap;
        decode_config(argmin, spec, plus, minus, gap);
        rep.worst_eplus_hex = plus.to_hex();
        rep.worst_eminus_hex = minus.to_hex();
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::vector<ShardResult> make_shards(unsigned long long total, unsigned long long shard_size) {
    std::vector<ShardResult> shards;
    for (unsigned long long b = 0; b < total; b += shard_size) {
        ShardResult s;
        s.begin = b;
        s.end = std::min(total, b + shard_size);
        shards.push_back(s);
    }
    if (shards.empty()) shards.push_back(ShardResult{0, 0, true, 0, 0, false, Rational(0), 0});
    return shards;
}

// Deterministic in-house uniform draw: stdlib distributions differ across
// implementations, and reports must reproduce bit-for-bit from the seed.
uint64_t draw(std::mt19937_64& rng, uint64_t n) { return rng() % n; }

SearchReport run_anneal(const SearchConfig& cfg) {
    GridSpec spec(cfg.dim, cfg.level);
    long long n_cells = spec.cell_count();
    auto t0 = std::chrono::steady_clock::now();

    struct ChainResult {
        bool has_best = false;
        Rational best;
        std::vector<int> labels;
        unsigned long long examined = 0;
        unsigned long long feasible = 0;
    };

    int chains = std::max(1, cfg.anneal_chains);
    unsigned long long iters = std::max<unsigned long long>(1, cfg.budget / chains);
    std::vector<ChainResult> results(chains);

    auto run_chain = [&](int chain_id) {
        ChainResult& res = results[chain_id];
        std::mt19937_64 rng(cfg.seed ^ (0x9e3779b97f4a7c15ULL * (chain_id + 1)));

        // Start from a feasible split: shuffled half/half, no gap cells.
        std::vector<int> labels(n_cells, 0);
        std::vector<long long> order(n_cells);
        for (long long i = 0; i < n_cells; ++i) order[i] = i;
        for (long long i = n_cells - 1; i > 0; --i)
            std::swap(order[i], order[draw(rng, i + 1)]);
        for (long long i = 0; i < n_cells; ++i) labels[order[i]] = i < n_cells / 2 ? 0 : 1;

        auto build = [&](const std::vector<int>& lab, CellSet& p, CellSet& m, CellSet& g) {
            p = CellSet(spec); m = CellSet(spec); g = CellSet(spec);
            for (long long c = 0; c < n_cells; ++c)
                (lab[c] == 0 ? p : lab[c] == 1 ? m : g).insert(c);
        };

        CellSet p, m, g;
        build(labels, p, m, g);
        if (!feasible_config(p, m, g, cfg.tau, cfg.strict_feasibility)) return;  // e.g. 1-cell grid
        Rational cur = best_balanced_region(p, m, cfg.kind, cfg.refine).score;
        res.has_best = true;
        res.best = cur;
        res.labels = labels;
        ++res.feasible;

        double t_hi = 0.25, t_lo = 1e-4;
        for (unsigned long long it = 0; it < iters; ++it) {
            ++res.examined;
            long long cell = static_cast<long long>(draw(rng, n_cells));
            int old_label = labels[cell];
            int new_label = (old_label + 1 + static_cast<int>(draw(rng, 2))) % 3;
            labels[cell] = new_label;
            build(labels, p, m, g);
            if (!feasible_config(p, m, g, cfg.tau, cfg.strict_feasibility)) {
                labels[cell] = old_label;
                continue;
            }
            ++res.feasible;
            Rational cand = best_balanced_region(p, m, cfg.kind, cfg.refine).score;
            double temp = t_hi * std::pow(t_lo / t_hi,
                                          iters > 1 ? double(it) / double(iters - 1) : 1.0);
            double delta = cand.to_double() - cur.to_double();
            bool accept = delta <= 0.0;
            if (!accept) {
                double u = double(rng() >> 11) * (1.0 / 9007199254740992.0);
                accept = u < std::exp(-delta / temp);
            }
            if (accept) {
                cur = cand;
                if (cand < res.best) {
                    res.best = cand;
                    res.labels = labels;
                }
            } else {
                labels[cell] = old_label;
            }
        }
    };

    // Chains are fixed in number and independently seeded, so the outcome is
    // the same no matter how many workers execute them.
    std::atomic<int> next{0};
    auto worker = [&] {
        while (true) {
            int id = next.fetch_add(1);
            if (id >= chains) break;
            run_chain(id);
        }
    };
    int workers = std::max(1, cfg.workers);
    std::vector<std::thread> pool;
    for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    SearchReport rep;
    rep.config = cfg;
    bool has_best = false;
    int best_chain = -1;
    for (int c = 0; c < chains; ++c) {
        rep.configurations_examined += results[c].examined;
        rep.feasible_count += results[c].feasible;
        rep.batches.push_back({static_cast<unsigned long long>(c),
                               static_cast<unsigned long long>(c), results[c].examined,
                               results[c].feasible, results[c].has_best, results[c].best});
        if (results[c].has_best && (!has_best || results[c].best < results[best_chain].best)) {
            has_best = true;
            best_chain = c;
        }
    }
    if (!has_best) {
        rep.vacuous = true;
        rep.s_hat = Rational(1, 2);
    } else {
        rep.s_hat = results[best_chain].best;
        CellSet p(spec), m(spec), g(spec);
        for (long long c = 0; c < n_cells; ++c) {
            int lab = results[best_chain].labels[c];
            (lab == 0 ? p : lab == 1 ? m : g).insert(c);
        }
        rep.worst_eplus_hex = p.to_hex();
        rep.worst_eminus_hex = m.to_hex();
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace

BestRegionResult best_balanced_region(const CellSet& eplus, const CellSet& eminus,
                                      CollectionKind kind, int refine) {
    if (!(eplus.spec() == eminus.spec())) throw DimMismatch();
    if (eplus.intersects(eminus)) throw Error("E+ and E- must be disjoint");
    if (eplus.empty() || eminus.empty()) throw DegenerateSet("both sets need positive measure");

    std::optional<BestRegionResult> best;
    for (const Region& r : enumerate_regions(kind, eplus.spec(), refine)) {
        Rational meas = r.measure();
        Rational score = std::min(r.intersection_measure(eplus), r.intersection_measure(eminus)) / meas;
        if (!best || score > best->score ||
            (score == best->score && meas > best->region.measure())) {
            best = BestRegionResult{r, score};
        }
    }
    return *best;
}

SearchReport frontier_search(const SearchConfig& cfg) {
    GridSpec spec(cfg.dim, cfg.level);
    if (cfg.strategy == SearchStrategy::Anneal) return run_anneal(cfg);
    unsigned long long total = pow3_checked(static_cast<int>(spec.cell_count()), cfg.budget);
    return run_exhaustive(cfg, make_shards(total, std::max(1ULL, cfg.checkpoint_every)));
}

SearchReport frontier_search_resume(const SearchConfig& cfg) {
    if (cfg.strategy != SearchStrategy::Exhaustive)
        throw Error("only exhaustive searches are resumable");
    if (cfg.checkpoint_path.empty()) throw Error("resume needs a checkpoint path");
    std::ifstream in(cfg.checkpoint_path);
    if (!in) throw Error("cannot open checkpoint " + cfg.checkpoint_path);
    json j = json::parse(in);
    if (j.at("dim").get<int>() != cfg.dim || j.at("level").get<int>() != cfg.level ||
        j.at("kind").get<std::string>() != to_string(cfg.kind) ||
        j.at("tau").get<std::string>() != cfg.tau.to_string())
        throw Error("checkpoint does not match this configuration");
    std::vector<ShardResult> shards;
    for (const auto& sj : j.at("shards")) {
        ShardResult s;
        load_shard(sj, s);
        if (!s.done) {  // partial shards restart from scratch
            s.examined = 0;
            s.feasible = 0;
            s.has_min = false;
        }
        shards.push_back(s);
    }
    return run_exhaustive(cfg, std::move(shards));
}

MinimalityReport minimality_scan(const CellSet& fplus, const CellSet& fminus,
                                 const Rational& tau_prime, int refine,
                                 const std::optional<Region>& cube) {
    if (fplus.intersects(fminus)) throw Error("F+ and F- must be disjoint");
    if (tau_prime.sign() <= 0 || tau_prime >= Rational(1, 2))
        throw Error("tau' must lie in (0, 1/2)");
    const GridSpec& spec = fplus.spec();
    Region v = cube.value_or(Region(AxisCube::whole(spec.dim)));

    MinimalityReport rep;
    rep.cube = v;
    rep.meas_plus = v.intersection_measure(fplus);
    rep.meas_minus = v.intersection_measure(fminus);
    Rational gap_meas = v.measure() - rep.meas_plus - rep.meas_minus;
    rep.tau_gap = tau_prime * gap_meas;
    rep.equality_defect = (rep.meas_plus - rep.meas_minus).abs();

    bool both_positive = rep.meas_plus.sign() > 0 && rep.meas_minus.sign() > 0;
    rep.exceptional = both_positive && gap_meas.is_zero();
    rep.good = both_positive && gap_meas.sign() > 0 &&
               std::min(rep.meas_plus, rep.meas_minus) >= rep.tau_gap;

    if (rep.exceptional) {
        // The balancing cube of the exceptional case: fractions (1/2, 1/2)
        // up to the discrete tolerance.
        AxisCube vq(v.level, v.corner, v.sides[0]);
        auto bal = bidensity_continuous(fplus, vq, Rational(1, 2), refine);
        rep.balancing_cube = bal.region;
        rep.balancing_fraction = bal.fraction;
        return rep;
    }
    if (!rep.good) return rep;

    // Hunt for a strictly smaller good or exceptional subcube.
    AxisCube vq(v.level, v.corner, v.sides[0]);
    for (const Region& w : enumerate_regions(CollectionKind::Cubes, spec, refine, vq)) {
        if (w.at_level(std::max(w.level, v.level)) == v.at_level(std::max(w.level, v.level)))
            continue;  // skip V itself
        Rational wp = w.intersection_measure(fplus);
        Rational wm = w.intersection_measure(fminus);
        if (wp.is_zero() || wm.is_zero()) continue;
        Rational wgap = w.measure() - wp - wm;
        bool w_exceptional = wgap.is_zero();
        bool w_good = wgap.sign() > 0 && std::min(wp, wm) >= tau_prime * wgap;
        if (w_exceptional || w_good) {
            rep.witness = w;
            break;
        }
    }
    rep.minimal = !rep.witness.has_value();

    if (rep.minimal) {
        // Discrete analog of the equality at minimality: within the jump a
        // one-refined-cell shrink can cause.
        long long side_refined = v.sides[0] << (spec.level + refine - v.level);
        Rational slab(1);
        for (int a = 0; a + 1 < spec.dim; ++a) slab *= Rational(side_refined);
        slab *= Rational::pow2(-spec.dim * (spec.level + refine));
        Rational tol = (Rational(1) + tau_prime) * slab;
        rep.fap_within_tolerance =
            (std::min(rep.meas_plus, rep.meas_minus) - rep.tau_gap).abs() <= tol;
    }
    return rep;
}

QuestionBReport question_b_experiment(int dim, int level, const Rational& tau_prime, int trials,
                                      uint64_t seed) {
    if (dim < 1 || dim > 2) throw Error("question B experiments cover d in {1, 2}");
    GridSpec spec(dim, level);
    std::mt19937_64 rng(seed);
    long long n = spec.cells_per_axis();

    auto random_rect_union = [&](int max_rects) {
        CellSet s(spec);
        int count = 1 + static_cast<int>(draw(rng, max_rects));
        for (int r = 0; r < count; ++r) {
            std::vector<long long> lo(dim), hi(dim);
            for (int a = 0; a < dim; ++a) {
                long long x = static_cast<long long>(draw(rng, n));
                long long y = static_cast<long long>(draw(rng, n));
                lo[a] = std::min(x, y);
                hi[a] = std::max(x, y);
            }
            std::vector<long long> cur(lo);
            while (true) {
                s.insert(spec.cell_index(cur.data()));
                int a = 0;
                while (a < dim) {
                    if (++cur[a] <= hi[a]) break;
                    cur[a] = lo[a];
                    ++a;
                }
                if (a == dim) break;
            }
        }
        return s;
    };

    QuestionBReport rep;
    rep.dim = dim;
    rep.level = level;
    rep.tau_prime = tau_prime;
    rep.seed = seed;
    rep.implied_s = tau_prime / (Rational(2) * tau_prime + Rational(1));
    rep.max_defect = Rational(0);

    for (int trial = 0; trial < trials; ++trial) {
        CellSet fplus(spec), fminus(spec);
        bool found = false;
        for (int attempt = 0; attempt < 200 && !found; ++attempt) {
            fplus = random_rect_union(3);
            fminus = random_rect_union(3) - fplus;
            if (fplus.empty() || fminus.empty()) continue;
            MinimalityReport root = minimality_scan(fplus, fminus, tau_prime);
            if (root.good) found = true;
        }
        if (!found) continue;  // keep the trial count honest but skip duds

        // Descend minimality witnesses until a minimal or exceptional cube.
        Region v(AxisCube::whole(dim));
        QuestionBRow row;
        row.trial = trial;
        for (int depth = 0; depth < 1 << 20; ++depth) {
            MinimalityReport rp = minimality_scan(fplus, fminus, tau_prime, 0, v);
            if (rp.exceptional) {
                row.ended_exceptional = true;
                row.minimal_cube = v;
                Rational frac = *rp.balancing_fraction;
                Rational w_meas = rp.balancing_cube->measure();
                row.defect = ((frac - (Rational(1) - frac)) * w_meas).abs();
                break;
            }
            if (rp.minimal || !rp.witness) {
                row.minimal_cube = v;
                row.defect = rp.equality_defect;
                break;
            }
            v = *rp.witness;
        }
        if (!row.ended_exceptional && row.defect > rep.max_defect) rep.max_defect = row.defect;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace bmolab
