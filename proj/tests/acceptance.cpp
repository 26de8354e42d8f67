// Acceptance suite: one line per criterion, exit 0 iff all pass.
//
// Everything on the measure side is exact rational arithmetic; only the
// exponential bound sides are doubles, compared with 1e-12 slack.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "bmolab/harness.hpp"
#include "bmolab/io.hpp"

using namespace bmolab;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

uint64_t draw(std::mt19937_64& rng, uint64_t n) { return rng() % n; }

GridFunction random_signed(const GridSpec& spec, std::mt19937_64& rng, int top = 9) {
    std::vector<Rational> vals;
    for (long long c = 0; c < spec.cell_count(); ++c)
        vals.push_back(Rational(static_cast<long long>(draw(rng, top))) - Rational(top / 2));
    return GridFunction(spec, std::move(vals));
}

GridFunction random_nonneg(const GridSpec& spec, std::mt19937_64& rng, int top = 8) {
    std::vector<Rational> vals;
    for (long long c = 0; c < spec.cell_count(); ++c)
        vals.push_back(Rational(static_cast<long long>(draw(rng, top))));
    return GridFunction(spec, std::move(vals), true);
}

CellSet random_nonempty_set(const GridSpec& spec, std::mt19937_64& rng) {
    CellSet e(spec);
    for (long long c = 0; c < spec.cell_count(); ++c)
        if (draw(rng, 4) != 0) e.insert(c);
    if (e.empty()) e.insert(0);
    return e;
}

// Staircase N, N-1, ..., 1 on 2^level cells, a = 1/N (N divides 2^level).
GridFunction staircase(int n_steps, int level) {
    GridSpec spec(1, level);
    long long per = spec.cell_count() / n_steps;
    std::vector<Rational> vals;
    for (int k = 0; k < n_steps; ++k)
        for (long long i = 0; i < per; ++i) vals.push_back(Rational(n_steps - k));
    return GridFunction(spec, std::move(vals), true);
}

// ---------------------------------------------------------------- 1
void criterion_1() {
    std::mt19937_64 rng(1001);
    int pairs = 0;
    bool chain_ok = true;
    while (pairs < 1100) {
        int d = 1 + static_cast<int>(draw(rng, 3));
        int lmax = d == 1 ? 6 : d == 2 ? 3 : 2;
        GridSpec spec(d, 1 + static_cast<int>(draw(rng, lmax)));
        GridFunction f = random_signed(spec, rng);
        CellSet e = random_nonempty_set(spec, rng);
        OscillationReport r = oscillation(f, e);
        if (!(r.o <= r.a && r.a <= r.d && r.d <= Rational(2) * r.o)) chain_ok = false;
        ++pairs;
    }

    // indicator equality cases: O = p, A = D = 2p(1-p), exactly
    bool indicator_ok = true;
    for (long long num = 1; num <= 8; ++num) {
        Rational p(num, 16);
        WeightedValues ind = sort_and_merge({{Rational(1), p}, {Rational(0), Rational(1) - p}});
        OscillationReport r = oscillation(ind);
        Rational expect_o = p <= Rational(1, 2) ? p : Rational(1) - p;
        Rational expect_ad = Rational(2) * p * (Rational(1) - p);
        if (!(r.o == expect_o && r.a == expect_ad && r.d == expect_ad)) indicator_ok = false;
    }
    report(1, chain_ok && indicator_ok,
           "O <= A <= D <= 2O exact on 1100 random (f,E); indicator closed forms exact");
}

// ---------------------------------------------------------------- 2
void criterion_2() {
    std::mt19937_64 rng(1002);
    bool equal_ok = true;
    const Rational svals[] = {Rational(1, 4), Rational(2, 5), Rational(1, 2), Rational(3, 4),
                              Rational(9, 10)};
    for (int iter = 0; iter < 1000; ++iter) {
        int d = 1 + static_cast<int>(draw(rng, 2));
        GridSpec spec(d, d == 1 ? 1 + static_cast<int>(draw(rng, 5)) : 2);
        GridFunction f = random_nonneg(spec, rng);
        CellSet e = random_nonempty_set(spec, rng);
        const Rational& s = svals[draw(rng, 5)];
        if (j_functional_def(f, e, s) != j_functional_rearr(f, e, s)) equal_ok = false;
    }

    // every representable staircase: a = 1/2, 1/4, 1/8, 1/16
    bool stair_ok = true;
    for (int steps : {2, 4, 8, 16}) {
        GridFunction f = staircase(steps, 4);
        CellSet full = CellSet::full(f.spec());
        for (const Rational& s : svals)
            if (j_functional_def(f, full, s) != j_functional_rearr(f, full, s)) stair_ok = false;
        // J = 0 strictly above s = 1 - a, J >= 1/2 at and below it
        Rational boundary = Rational(1) - Rational(1, steps);
        if (j_functional_def(f, full, boundary) < Rational(1, 2)) stair_ok = false;
        if (j_functional_def(f, full, boundary + Rational(1, 100)) != Rational(0))
            stair_ok = false;
    }

    // the a = 1/4 fixture: J = 0 for s > 3/4, J >= 1/2 for s <= 3/4, J = 1 at 1/2
    GridFunction quarter = staircase(4, 2);
    CellSet full = CellSet::full(quarter.spec());
    bool fixture_ok = j_functional_def(quarter, full, Rational(1, 2)) == Rational(1) &&
                      j_functional_def(quarter, full, Rational(3, 4)) >= Rational(1, 2) &&
                      j_functional_def(quarter, full, Rational(4, 5)) == Rational(0) &&
                      j_functional_def(quarter, full, Rational(9, 10)) == Rational(0);
    report(2, equal_ok && stair_ok && fixture_ok,
           "definition and rearrangement routes agree exactly; staircase values confirmed");
}

// ------------------------------------------------------------- 3 & 7
// One pass over the corpus: 1000 functions per (d, L) with dL <= 8. The
// mainjs report carries both seminorms, so the Chebyshev check rides along.
void criteria_3_and_7() {
    std::vector<std::pair<int, int>> shapes;
    for (int d = 1; d <= 8; ++d)
        for (int L = 1; d * L <= 8; ++L) shapes.emplace_back(d, L);

    bool cheb_ok = true, mainjs_ok = true;
    long long functions = 0, violations = 0;
    std::mt19937_64 rng(1007);
    for (auto [d, L] : shapes) {
        GridSpec spec(d, L);
        CollectionKind kind = CollectionKind::DyadicCubes;
        CertifiedPair cert = certified_pair(d, kind);
        JsPair pair(cert.tau, cert.s, JsPair::Provenance::Certified);
        double r_max = (QuadReal(Rational(1)) / (QuadReal(Rational(2)) * cert.tau)).to_double();
        // rational floor of the certified s for the exact Chebyshev side
        Rational s_floor(static_cast<long long>(cert.s.to_double() * (1 << 16)), 1 << 16);
        if (!(QuadReal(s_floor) <= cert.s)) s_floor -= Rational(1, 1 << 16);

        for (int i = 0; i < 1000; ++i) {
            GridFunction f = random_nonneg(spec, rng);
            MainJsReport rep = verify_mainjs(f, kind, pair, 1.0);
            MainJsReport rep2 = verify_mainjs(f, kind, pair, r_max);
            if (!rep.pass() || !rep2.pass()) { mainjs_ok = false; ++violations; }
            if (!(rep.j_seminorm <= rep.o_seminorm / s_floor)) {
                cheb_ok = false;
                ++violations;
            }
            ++functions;
        }
    }
    report(3, cheb_ok, "J-seminorm <= O-seminorm / s with zero violations on the corpus");

    // printed constants of the special-rectangle remark
    double sqrt2 = std::sqrt(2.0);
    double prefactor = std::max(1.0 / (2.0 * (sqrt2 - 1.0)),
                                2.0 * std::sqrt(1.0 / (2.0 * (sqrt2 - 1.0))));
    double expo = (3.0 - 2.0 * sqrt2) / 2.0 * std::log(1.0 / (2.0 * sqrt2 - 2.0)) / 8.0;
    bool consts_ok = std::abs(prefactor - 2.197) < 1e-3 && std::abs(expo - 0.002) < 1e-3 &&
                     std::abs(std::log(2.0) / 16.0 - 0.043) < 1e-3;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%lld functions at r=1 and r=1/(2tau); prefactor %.4f~2.197, exponent %.5f~0.002,"
                  " ln2/16 %.4f~0.043",
                  functions, prefactor, expo, std::log(2.0) / 16.0);
    report(7, mainjs_ok && consts_ok && violations == 0, buf);
}

// ---------------------------------------------------------------- 4
void criterion_4() {
    std::mt19937_64 rng(1004);
    QuadReal tau = tau_sqrt2_minus_1();
    bool bound_ok = true;
    for (int d = 1; d <= 3; ++d) {
        QuadReal floor_s = QuadReal(Rational::pow2(-d)) * three_minus_2sqrt2();
        GridSpec spec(d, d == 1 ? 5 : d == 2 ? 3 : 2);
        int done = 0;
        while (done < 1000) {
            CellSet p(spec), m(spec), g(spec);
            for (long long c = 0; c < spec.cell_count(); ++c) {
                switch (draw(rng, 3)) {
                    case 0: p.insert(c); break;
                    case 1: m.insert(c); break;
                    default: g.insert(c); break;
                }
            }
            if (p.empty() || m.empty()) continue;
            if (!(QuadReal(std::min(p.measure(), m.measure())) > tau * QuadReal(g.measure())))
                continue;
            BalanceCertificate cert = chain_descent(
                TriPartition(p, m, g), DecompositionSpec{DecompositionSpec::Rule::Dyadic}, tau);
            // recompute from scratch and compare against the certified floor
            Rational fp = cert.region.intersection_measure(p) / cert.region.measure();
            Rational fm = cert.region.intersection_measure(m) / cert.region.measure();
            if (!(QuadReal(std::min(fp, fm)) >= floor_s)) bound_ok = false;
            if (!(fp == cert.frac_plus && fm == cert.frac_minus)) bound_ok = false;
            ++done;
        }
    }
    // constants to full printed precision
    double s_w = (QuadReal(Rational(1, 2)) * three_minus_2sqrt2()).to_double();
    bool consts_ok = std::abs(s_w - 0.0857864) < 5e-8;
    for (int d = 1; d <= 3 && consts_ok; ++d) {
        QuadReal s = certified_pair(d, CollectionKind::Cubes).s;
        consts_ok = s * QuadReal(Rational(1LL << d)) == three_minus_2sqrt2();
    }
    report(4, bound_ok && consts_ok,
           "3000 certificates with exact min-fraction >= 2^-d(3-2sqrt2); constants reproduced");
}

// ---------------------------------------------------------------- 5
void criterion_5() {
    QuadReal tau = tau_sqrt2_minus_1();
    QuadReal floor_s = QuadReal(Rational(1, 2)) * three_minus_2sqrt2();
    bool ok = true;
    for (int L : {2, 3}) {
        SearchConfig cfg;
        cfg.tau = tau;
        cfg.dim = 1;
        cfg.level = L;
        cfg.kind = CollectionKind::Intervals;
        cfg.budget = 10'000;
        cfg.workers = 2;
        SearchReport rep = frontier_search(cfg);
        if (rep.vacuous || !(QuadReal(rep.s_hat) >= floor_s)) ok = false;

        GridSpec spec(1, L);
        unsigned long long total = 1;
        for (long long c = 0; c < spec.cell_count(); ++c) total *= 3;
        Rational reflected_min(1);
        bool any = false;
        for (unsigned long long idx = 0; idx < total; ++idx) {
            CellSet p(spec), m(spec), g(spec);
            unsigned long long v = idx;
            for (long long c = 0; c < spec.cell_count(); ++c) {
                long long rc = spec.cell_count() - 1 - c;  // reflected cell
                (v % 3 == 0 ? p : v % 3 == 1 ? m : g).insert(rc);
                v /= 3;
            }
            if (p.empty() || m.empty()) continue;
            if (!(QuadReal(std::min(p.measure(), m.measure())) > tau * QuadReal(g.measure())))
                continue;
            any = true;
            Rational score = best_balanced_region(p, m, cfg.kind).score;
            reflected_min = std::min(reflected_min, score);
            // every feasible configuration dominates its own certificate
            BalanceCertificate cert = chain_descent(
                TriPartition(p, m, g), DecompositionSpec{DecompositionSpec::Rule::Dyadic}, tau);
            if (!(score >= cert.min_fraction()) || !(QuadReal(cert.min_fraction()) >= floor_s))
                ok = false;
        }
        if (!any || reflected_min != rep.s_hat) ok = false;
    }
    report(5, ok, "exhaustive s_hat(d=1, L=2,3) >= (3-2sqrt2)/2 per config; reflection invariant");
}

// ---------------------------------------------------------------- 6
void criterion_6() {
    std::mt19937_64 rng(1006);
    Rational sigma(46, 100);
    QuadReal tau = tau_sqrt2_minus_1();
    QuadReal window = (QuadReal(Rational(2)) * tau) /
                      (QuadReal(Rational(1)) + QuadReal(Rational(2)) * tau);
    bool window_ok = std::abs(window.to_double() - 0.45308) < 1e-5 &&
                     QuadReal(sigma) > window;

    bool transfer_ok = true;
    int checked = 0;
    while (checked < 1000) {
        int d = 1 + static_cast<int>(draw(rng, 2));
        GridSpec spec(d, d == 1 ? 2 + static_cast<int>(draw(rng, 2)) : 2);
        CollectionKind kind = d == 1 ? CollectionKind::Intervals : CollectionKind::DyadicCubes;
        CertifiedPair cert = certified_pair(d, kind);
        JsPair pair(cert.tau, cert.s, JsPair::Provenance::Certified);

        // two-valued functions always satisfy the 1/2 hypothesis; richer
        // candidates enter when their seminorm cooperates
        GridFunction f = [&] {
            if (draw(rng, 2) == 0) {
                long long base = static_cast<long long>(draw(rng, 4));
                std::vector<Rational> vals;
                for (long long c = 0; c < spec.cell_count(); ++c)
                    vals.push_back(Rational(base + static_cast<long long>(draw(rng, 2))));
                return GridFunction(spec, std::move(vals), true);
            }
            return random_nonneg(spec, rng, 4);
        }();
        try {
            TransferReport rep = rearrangement_transfer_check(f, kind, pair, sigma);
            if (!rep.pass) transfer_ok = false;
            ++checked;
        } catch (const HypothesisViolated&) {
            continue;  // seminorm above 1/2: outside the theorem's scope
        }
    }
    report(6, window_ok && transfer_ok,
           "1000 transfers at sigma=0.46 hold; window constant 0.45308 reproduced to 5 decimals");
}

// ---------------------------------------------------------------- 8
void criterion_8() {
    std::mt19937_64 rng(1008);
    bool envelope_ok = true;
    using C = JnConstants::Center;
    using Cm = JnConstants::Comparison;
    using F = JnConstants::Flavor;
    const C centers[] = {C::Mean, C::Median};
    const Cm comps[] = {Cm::Strict, Cm::NonStrict};
    const F flavors[] = {F::O, F::A, F::D};

    for (int iter = 0; iter < 500; ++iter) {
        JnConstants cur;
        cur.b = 0.01 + 0.2 * (draw(rng, 1000) / 1000.0);
        cur.big_b = 1.0 + draw(rng, 1000) / 500.0;
        cur.center = centers[draw(rng, 2)];
        cur.comparison = comps[draw(rng, 2)];
        cur.flavor = flavors[draw(rng, 3)];
        for (int step = 0; step < 6; ++step) {
            JnConstants next = convert_constants(cur, centers[draw(rng, 2)], comps[draw(rng, 2)],
                                                 flavors[draw(rng, 3)]);
            bool b_env = next.b >= cur.b / 2 - 1e-15 && next.b <= cur.b + 1e-15;
            bool big_env = next.big_b >= cur.big_b - 1e-12 &&
                           next.big_b <= std::exp(cur.b) * cur.big_b + 1e-12;
            if (!b_env || !big_env || next.big_b < 1.0) envelope_ok = false;
            cur = next;
        }
    }

    JnConstants wik = wik_constants(3);
    JnConstants mean = convert_constants(wik, C::Mean, wik.comparison, wik.flavor);
    bool wik_ok = wik.big_b == 2.0 && mean.big_b == 2.0 * std::exp(wik.b) && mean.b == wik.b;
    report(8, envelope_ok && wik_ok,
           "500 random 6-step compositions stay in the per-step envelope; Wik pair B = 2e^b");
}

// ---------------------------------------------------------------- 9
void criterion_9() {
    QuestionBReport rep = question_b_experiment(1, 6, Rational(3, 10), 100, 2026);
    bool defect_ok = !rep.rows.empty();
    Rational cell(1, 64);
    for (const auto& row : rep.rows)
        if (!row.ended_exceptional && row.defect > cell) defect_ok = false;

    // fixed continuum instance F+ = [0, 1/3], F- = [3/5, 1] sampled on finer
    // and finer grids: the minimal-interval defect decreases to zero
    bool monotone_ok = true;
    Rational prev(-1);
    for (int L = 4; L <= 8; ++L) {
        GridSpec spec(1, L);
        long long n = spec.cells_per_axis();
        CellSet fplus(spec), fminus(spec);
        for (long long c = 0; c < n; ++c) {
            // cell [c/n, (c+1)/n] inside [0,1/3] resp. [3/5,1]
            if (Rational(c + 1) / Rational(n) <= Rational(1, 3)) fplus.insert(c);
            if (Rational(c) / Rational(n) >= Rational(3, 5)) fminus.insert(c);
        }
        Region v(AxisCube::whole(1));
        Rational defect;
        for (int depth = 0; depth < 1 << 12; ++depth) {
            MinimalityReport mr = minimality_scan(fplus, fminus, Rational(3, 10), 0, v);
            if (mr.exceptional || mr.minimal || !mr.witness) {
                defect = mr.equality_defect;
                break;
            }
            v = *mr.witness;
        }
        if (prev.sign() >= 0 && defect > prev) monotone_ok = false;
        prev = defect;
        if (L == 8 && defect > Rational(1, 256)) monotone_ok = false;
    }
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "d=1 L=6: %zu trials, max defect %s <= 1/64; fixed-instance defects decrease",
                  rep.rows.size(), rep.max_defect.to_fraction_string().c_str());
    report(9, defect_ok && monotone_ok, buf);
}

// ---------------------------------------------------------------- 10
void criterion_10() {
    SearchConfig cfg;
    cfg.tau = tau_sqrt2_minus_1();
    cfg.dim = 1;
    cfg.level = 2;
    cfg.kind = CollectionKind::Intervals;
    cfg.budget = 10'000;
    cfg.seed = 99;
    cfg.checkpoint_every = 11;

    cfg.workers = 1;
    std::string one = to_json(frontier_search(cfg), false).dump();
    cfg.workers = 4;
    std::string four = to_json(frontier_search(cfg), false).dump();

    SearchConfig an = cfg;
    an.strategy = SearchStrategy::Anneal;
    an.budget = 2000;
    an.workers = 1;
    std::string a1 = to_json(frontier_search(an), false).dump();
    an.workers = 4;
    std::string a4 = to_json(frontier_search(an), false).dump();

    report(10, one == four && a1 == a4,
           "exhaustive and anneal reports byte-identical for 1 vs 4 workers at fixed seed");
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criteria_3_and_7();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_8();
    criterion_9();
    criterion_10();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s (%d criterion failures, %.1fs)\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
                g_failures, secs);
    return g_failures == 0 ? 0 : 1;
}
