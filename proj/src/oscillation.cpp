#include "bmolab/oscillation.hpp"

#include <algorithm>

namespace bmolab {

OscFlavor parse_osc_flavor(const std::string& name) {
    if (name == "O" || name == "o") return OscFlavor::O;
    if (name == "A" || name == "a") return OscFlavor::A;
    if (name == "D" || name == "d") return OscFlavor::D;
    throw ParseError("unknown oscillation flavor '" + name + "'");
}

MedianResult median(const WeightedValues& wv) {
    if (wv.empty()) throw EmptyRegion();
    Rational half = wv.total / Rational(2);

    // lo: smallest value v with lambda({f > v}) <= T/2.
    // hi: largest value v with lambda({f < v}) <= T/2.
    // When the half-mass is hit exactly between consecutive values the whole
    // gap consists of medians and the set is still a closed interval.
    size_t n = wv.size();
    std::vector<Rational> below(n), above(n);
    Rational acc(0);
    for (size_t i = 0; i < n; ++i) {
        below[i] = acc;
        acc += wv.atoms[i].weight;
    }
    acc = Rational(0);
    for (size_t i = n; i-- > 0;) {
        above[i] = acc;
        acc += wv.atoms[i].weight;
    }

    MedianResult m;
    bool found_lo = false;
    for (size_t i = 0; i < n; ++i) {
        if (above[i] <= half && below[i] <= half) {
            if (!found_lo) {
                m.lo = wv.atoms[i].value;
                found_lo = true;
            }
            m.hi = wv.atoms[i].value;
        }
    }
    if (!found_lo) throw Error("internal: median set empty");
    return m;
}

MedianResult median(const GridFunction& f, const CellSet& e) { return median(restrict(f, e)); }
MedianResult median(const GridFunction& f, const Region& r) { return median(restrict(f, r)); }

Rational mean_abs_deviation(const WeightedValues& wv, const Rational& c) {
    Rational sum(0);
    for (const auto& a : wv.atoms) sum += (a.value - c).abs() * a.weight;
    return sum / wv.total;
}

OscillationReport oscillation(const WeightedValues& wv) {
    if (wv.empty()) throw EmptyRegion();
    OscillationReport rep;
    rep.median = median(wv).canonical();
    rep.o = mean_abs_deviation(wv, rep.median);

    Rational sum(0);
    for (const auto& a : wv.atoms) sum += a.value * a.weight;
    rep.mean = sum / wv.total;
    rep.a = mean_abs_deviation(wv, rep.mean);

    // Exact pairwise double sum; O(n^2) in distinct values is fine here.
    Rational dsum(0);
    for (size_t i = 0; i < wv.size(); ++i)
        for (size_t j = i + 1; j < wv.size(); ++j)
            dsum += (wv.atoms[i].value - wv.atoms[j].value).abs() * wv.atoms[i].weight *
                    wv.atoms[j].weight;
    rep.d = Rational(2) * dsum / (wv.total * wv.total);
    return rep;
}

OscillationReport oscillation(const GridFunction& f, const CellSet& e) {
    return oscillation(restrict(f, e));
}
OscillationReport oscillation(const GridFunction& f, const Region& r) {
    return oscillation(restrict(f, r));
}

Rational bmo_seminorm(const GridFunction& f, CollectionKind kind, OscFlavor flavor, int refine) {
    Rational best(0);
    for (const Region& r : enumerate_regions(kind, f.spec(), refine)) {
        WeightedValues wv = restrict(f, r);
        Rational v;
        switch (flavor) {
            case OscFlavor::O: v = mean_abs_deviation(wv, median(wv).canonical()); break;
            case OscFlavor::A: {
                Rational sum(0);
                for (const auto& a : wv.atoms) sum += a.value * a.weight;
                v = mean_abs_deviation(wv, sum / wv.total);
                break;
            }
            case OscFlavor::D: v = oscillation(wv).d; break;
        }
        best = std::max(best, v);
    }
    return best;
}

Rational median_vs_mean_gap(const GridFunction& f, const CellSet& e) {
    WeightedValues wv = restrict(f, e);
    MedianResult m = median(wv);
    OscillationReport rep = oscillation(wv);
    Rational gap = (rep.mean - m.lo).abs();
    Rational gap_hi = (rep.mean - m.hi).abs();
    if (gap > rep.o || gap_hi > rep.o)
        throw Error("median/mean gap exceeds mean oscillation; arithmetic bug");
    return gap;
}

}  // namespace bmolab
