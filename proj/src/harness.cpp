#include "bmolab/harness.hpp"

#include <algorithm>
#include <cmath>

namespace bmolab {

JnConstants::Center parse_center(const std::string& s) {
    if (s == "mean") return JnConstants::Center::Mean;
    if (s == "median") return JnConstants::Center::Median;
    throw ParseError("unknown center '" + s + "'");
}
JnConstants::Comparison parse_comparison(const std::string& s) {
    if (s == "strict") return JnConstants::Comparison::Strict;
    if (s == "non-strict") return JnConstants::Comparison::NonStrict;
    throw ParseError("unknown comparison '" + s + "'");
}
JnConstants::Flavor parse_flavor(const std::string& s) {
    if (s == "O") return JnConstants::Flavor::O;
    if (s == "A") return JnConstants::Flavor::A;
    if (s == "D") return JnConstants::Flavor::D;
    if (s == "J") return JnConstants::Flavor::J;
    throw ParseError("unknown flavor '" + s + "'");
}
std::string to_string(JnConstants::Center c) {
    return c == JnConstants::Center::Mean ? "mean" : "median";
}
std::string to_string(JnConstants::Comparison c) {
    return c == JnConstants::Comparison::Strict ? "strict" : "non-strict";
}
std::string to_string(JnConstants::Flavor f) {
    switch (f) {
        case JnConstants::Flavor::O: return "O";
        case JnConstants::Flavor::A: return "A";
        case JnConstants::Flavor::D: return "D";
        case JnConstants::Flavor::J: return "J";
    }
    return "?";
}

std::vector<Rational> default_alpha_grid(const GridFunction& f) {
    CellSet full = CellSet::full(f.spec());
    Rational m = median(f, full).canonical();
    WeightedValues wv = restrict(f, full);

    std::vector<Rational> levels;
    for (const auto& a : wv.atoms) levels.push_back((a.value - m).abs());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::vector<Rational> grid;
    grid.push_back(Rational(0));
    for (size_t i = 0; i < levels.size(); ++i) {
        grid.push_back(levels[i]);
        if (i + 1 < levels.size()) grid.push_back((levels[i] + levels[i + 1]) / Rational(2));
    }
    if (!levels.empty()) grid.push_back(levels.back() + Rational(1));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

namespace {

// The J functional takes a rational s; irrational certified s is rounded
// down. J is non-increasing in s, so a smaller s only enlarges the seminorm
// and weakens the bound being checked, never the other way. 2^-16 keeps the
// floor well inside the gap to the nearest window-mass threshold at desk
// scale, and keeps QuadReal comparisons far from 64-bit limits.
Rational rational_s_floor(const QuadReal& s) {
    if (s.is_rational()) return s.rational_part();
    Rational approx(static_cast<long long>(s.to_double() * (1LL << 16)), 1LL << 16);
    if (!(QuadReal(approx) <= s)) approx -= Rational(1, 1LL << 16);
    return approx;
}

}  // namespace

MainJsReport verify_mainjs(const GridFunction& f, CollectionKind kind, const JsPair& pair,
                           double r, const std::vector<Rational>& alphas) {
    // Certified pairs are validated against the theorem's own constants; a
    // stronger s than certified needs empirical provenance.
    if (pair.provenance == JsPair::Provenance::Certified) {
        CertifiedPair cert = certified_pair(f.spec().dim, kind);
        if (!(pair.s <= cert.s) || !(pair.tau >= cert.tau))
            throw PairUnsupported("pair exceeds the certified constants for this collection");
    }
    return verify_mainjs_unchecked(f, kind, pair.tau, pair.s, r, alphas);
}

MainJsReport verify_mainjs_unchecked(const GridFunction& f, CollectionKind kind,
                                     const QuadReal& tau, const QuadReal& s, double r,
                                     const std::vector<Rational>& alphas) {
    QuadReal r_max = QuadReal(Rational(1)) / (QuadReal(Rational(2)) * tau);
    if (r < 1.0 - 1e-12 || r > r_max.to_double() + 1e-9)
        throw Error("r outside [1, 1/(2 tau)]");

    CellSet full = CellSet::full(f.spec());
    Rational q_meas = full.measure();
    Rational m = median(f, full).canonical();

    // Exact tail measures of |f - m| from the sorted deviation atoms.
    WeightedValues wv = restrict(f, full);
    std::vector<WeightedValue> dev;
    for (const auto& a : wv.atoms) dev.push_back({(a.value - m).abs(), a.weight});
    WeightedValues devs = sort_and_merge(std::move(dev));
    auto tail_at_least = [&](const Rational& alpha) {
        Rational t(0);
        for (const auto& a : devs.atoms)
            if (a.value >= alpha) t += a.weight;
        return t;
    };

    MainJsReport rep;
    Rational s_for_j = rational_s_floor(s);
    rep.j_seminorm = j_seminorm(f, kind, s_for_j);
    rep.o_seminorm = bmo_seminorm(f, kind, OscFlavor::O);

    double prefactor = std::max(r, 2.0 * std::sqrt(r)) * q_meas.to_double();
    double log_r = std::log(r);
    double jn = rep.j_seminorm.to_double();
    double on = rep.o_seminorm.to_double();
    double s_dbl = s.to_double();

    rep.j_flavor.name = "J-seminorm flavor";
    rep.o_flavor.name = "O-seminorm flavor";
    const std::vector<Rational>& grid = alphas.empty() ? default_alpha_grid(f) : alphas;
    for (const Rational& alpha : grid) {
        Rational lhs = tail_at_least(alpha);
        double a_dbl = alpha.to_double();

        MarginRow jrow;
        jrow.alpha = alpha;
        jrow.lhs = lhs;
        jrow.rhs = jn == 0.0 ? (a_dbl > 0.0 ? 0.0 : prefactor)
                             : prefactor * std::exp(-a_dbl * log_r / (8.0 * jn));
        jrow.slack = jrow.rhs - lhs.to_double();
        jrow.pass = jrow.slack >= -kRhsSlack;
        rep.j_flavor.add(jrow);

        MarginRow orow;
        orow.alpha = alpha;
        orow.lhs = lhs;
        orow.rhs = on == 0.0 ? (a_dbl > 0.0 ? 0.0 : prefactor)
                             : prefactor * std::exp(-a_dbl * s_dbl * log_r / (8.0 * on));
        orow.slack = orow.rhs - lhs.to_double();
        orow.pass = orow.slack >= -kRhsSlack;
        rep.o_flavor.add(orow);
    }
    return rep;
}

Rational quantizer_phi(const Rational& t) {
    if (t.is_negative()) throw Error("quantizer domain is [0, infinity)");
    long long n = (t - Rational(1, 2)).ceil();
    return Rational(n < 0 ? 0 : n);
}

namespace {

bool check_phi_steps(const std::vector<Rational>& samples) {
    // phi(t) - phi(s) in {0, 1} whenever 0 <= s <= t <= s + 1/2.
    for (const Rational& s : samples) {
        for (const Rational& t : samples) {
            if (t < s || t > s + Rational(1, 2)) continue;
            Rational d = quantizer_phi(t) - quantizer_phi(s);
            if (!(d == Rational(0) || d == Rational(1))) return false;
        }
    }
    return true;
}

bool check_phi_floor(const std::vector<Rational>& samples) {
    for (const Rational& t : samples)
        if (quantizer_phi(t) < t - Rational(1, 2)) return false;
    return true;
}

std::vector<Rational> phi_sample_points(const GridFunction& f) {
    std::vector<Rational> pts;
    for (const auto& v : f.values())
        if (!v.is_negative()) pts.push_back(v);
    // dense rational samples plus the half-integer boundary points
    for (int k = 0; k <= 64; ++k) pts.push_back(Rational(k, 16));
    for (int k = 0; k <= 8; ++k) pts.push_back(Rational(2 * k + 1, 2));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

}  // namespace

ReductionReport reduction_pipeline_check(const GridFunction& f, CollectionKind kind,
                                         const Rational& s) {
    CellSet full = CellSet::full(f.spec());
    Rational m = median(f, full).canonical();
    Rational half = full.measure() / Rational(2);

    GridFunction g = f - m;
    GridFunction gplus = g.map([](const Rational& v) { return v.sign() > 0 ? v : Rational(0); });
    GridFunction gminus = g.map([](const Rational& v) { return v.sign() < 0 ? -v : Rational(0); });

    auto positive_mass = [&](const GridFunction& h) {
        Rational mass(0);
        Rational cell = f.spec().cell_measure();
        for (const auto& v : h.values())
            if (v.sign() > 0) mass += cell;
        return mass;
    };

    ReductionReport rep;
    rep.addprop_plus = positive_mass(gplus) <= half;
    rep.addprop_minus = positive_mass(gminus) <= half;

    std::vector<Rational> samples = phi_sample_points(gplus);
    rep.phi_steps_ok = check_phi_steps(samples);
    rep.phi_floor_ok = check_phi_floor(samples);

    Rational gp_norm = j_seminorm(gplus, kind, s);
    if (gp_norm.is_zero()) {
        rep.trivial = true;
        return rep;
    }
    GridFunction scaled = gplus * (Rational(1) / (Rational(4) * gp_norm));
    rep.scaled_seminorm = j_seminorm(scaled, kind, s);  // = 1/4 by homogeneity
    GridFunction quantized = scaled.map(quantizer_phi);
    rep.quantized_seminorm = j_seminorm(quantized, kind, s);
    rep.quantized_seminorm_ok =
        rep.scaled_seminorm < Rational(1, 3) && rep.quantized_seminorm <= Rational(1, 2);
    return rep;
}

TransferReport rearrangement_transfer_check(const GridFunction& f, CollectionKind kind,
                                            const JsPair& pair, const Rational& sigma) {
    if (!f.integer_valued()) throw HypothesisViolated("transfer check needs integer-valued f");
    // sigma must exceed 2 tau / (1 + 2 tau), exactly.
    QuadReal lower = (QuadReal(Rational(2)) * pair.tau) /
                     (QuadReal(Rational(1)) + QuadReal(Rational(2)) * pair.tau);
    if (!(QuadReal(sigma) > lower) || sigma > Rational(1, 2))
        throw HypothesisViolated("sigma outside (2 tau/(1+2 tau), 1/2]");

    Rational s_for_j = rational_s_floor(pair.s);

    TransferReport rep;
    rep.rhs = j_seminorm(f, kind, s_for_j);
    if (rep.rhs > Rational(1, 2)) throw HypothesisViolated("||f||_{J,s} must be <= 1/2");
    CellSet full = CellSet::full(f.spec());
    rep.lhs = step_interval_j_seminorm(rearrange(f, full), sigma);
    rep.pass = rep.lhs <= rep.rhs;
    return rep;
}

NinverseReport ninverse_probe(const CellSet& eplus, const CellSet& eminus, const CellSet& gap,
                              CollectionKind kind, const Rational& sigma, const Rational& s) {
    TriPartition part(eplus, eminus, gap);  // validates disjoint cover
    if (sigma.sign() <= 0 || sigma >= Rational(1, 2)) throw Error("sigma must lie in (0,1/2)");
    if (s.sign() <= 0 || s >= Rational(1, 2)) throw Error("s must lie in (0,1/2)");

    // Roles per the converse argument: f = 2 on the smaller of the two sets.
    const CellSet& small = eminus.measure() <= eplus.measure() ? eminus : eplus;
    const CellSet& large = eminus.measure() <= eplus.measure() ? eplus : eminus;

    NinverseReport rep;
    // tau implied by sigma < tau/(1+2 tau), at the boundary.
    Rational tau_implied = sigma / (Rational(1) - Rational(2) * sigma);
    rep.applicable =
        !small.empty() && !large.empty() &&
        std::min(small.measure(), large.measure()) > tau_implied * gap.measure();
    if (!rep.applicable) return rep;

    const GridSpec& spec = eplus.spec();
    std::vector<Rational> vals(spec.cell_count(), Rational(0));
    for (long long c : small.cells()) vals[c] = Rational(2);
    for (long long c : gap.cells()) vals[c] = Rational(1);
    GridFunction f(spec, std::move(vals), true);

    CellSet full = CellSet::full(spec);
    StepFunction star = rearrange(f, full);
    Rational lm = small.measure(), lg = gap.measure();
    rep.star_shape_ok = star.measure_equal(Rational(2)) == lm &&
                        star.measure_equal(Rational(1)) == lg &&
                        star.measure_equal(Rational(0)) == full.measure() - lm - lg;

    rep.star_seminorm = step_interval_j_seminorm(star, sigma);
    rep.f_seminorm = j_seminorm(f, kind, s);
    rep.transfer_holds = rep.star_seminorm <= rep.f_seminorm;
    if (!rep.transfer_holds) return rep;  // refutation of the transfer inequality

    // Extract the witness: the first region attaining the seminorm.
    for (const Region& r : enumerate_regions(kind, spec)) {
        if (j_functional_def(restrict(f, r), s) == rep.f_seminorm) {
            rep.witness = r;
            Rational meas = r.measure();
            rep.witness_min_fraction =
                std::min(r.intersection_measure(eplus), r.intersection_measure(eminus)) / meas;
            rep.balanced = rep.witness_min_fraction >= s;
            break;
        }
    }
    return rep;
}

JnConstants convert_constants(const JnConstants& from, JnConstants::Center center,
                              JnConstants::Comparison comparison, JnConstants::Flavor flavor,
                              double flavor_s) {
    from.validate();
    JnConstants out = from;

    // Strictness swap first: free.
    out.comparison = comparison;

    // Flavor swap: rescale b by the worst-case seminorm ratio.
    if (out.flavor != flavor) {
        if (flavor == JnConstants::Flavor::J)
            throw InvalidConstants("no conversion toward the J flavor: no C_d formula");
        using F = JnConstants::Flavor;
        auto rank = [](F f) { return f == F::O ? 0 : f == F::A ? 1 : 2; };
        double scale = 1.0;
        if (out.flavor == F::J) {
            scale = out.j_s;  // ||f||_{J,s} <= (1/s) ||f||_O
            out.flavor = F::O;
        }
        // O <= A <= D <= 2 O: moving down the chain can double the
        // denominator, moving up is free.
        if (rank(out.flavor) > rank(flavor)) scale *= 0.5;
        out.b *= scale;
        out.flavor = flavor;
        out.j_s = flavor_s;
    }

    // Center swap: B picks up e^b.
    if (out.center != center) {
        out.big_b *= std::exp(out.b);
        out.center = center;
    }
    out.validate();
    return out;
}

JnConstants wik_constants(int dim) {
    JnConstants c;
    c.b = std::log(2.0) / (32.0 * (2.0 + 6.0 * std::sqrt(dim / 3.14159265358979323846)));
    c.big_b = 2.0;
    c.center = JnConstants::Center::Median;
    c.comparison = JnConstants::Comparison::NonStrict;
    c.flavor = JnConstants::Flavor::A;
    return c;
}

WikComparison wik_comparison() {
    WikComparison w;
    double sqrt2 = std::sqrt(2.0);
    w.ours_prefactor = 2.0 / std::sqrt(2.0 * sqrt2 - 2.0);
    w.ours_decay = (3.0 - 2.0 * sqrt2) * std::log(1.0 / (2.0 * sqrt2 - 2.0)) / 16.0;
    w.wik_prefactor = 2.0;
    w.wik_decay = std::log(2.0) / 16.0;
    w.ours_prefactor_form = "2/sqrt(2*sqrt2-2)";
    w.ours_decay_form = "(3-2*sqrt2)*ln(1/(2*sqrt2-2))/16";
    w.wik_decay_form = "ln2/16";
    return w;
}

}  // namespace bmolab
