#include "bmolab/rearrangement.hpp"

#include <algorithm>

namespace bmolab {

StepFunction StepFunction::from_pieces(std::vector<std::pair<Rational, Rational>> pieces) {
    StepFunction f;
    f.breaks_.push_back(Rational(0));
    for (auto& [len, val] : pieces) {
        if (len.sign() <= 0) throw Error("step piece length must be positive");
        if (!f.values_.empty() && val > f.values_.back())
            throw Error("step values must be non-increasing");
        if (!f.values_.empty() && val == f.values_.back()) {
            f.breaks_.back() += len;  // merge equal-value run
        } else {
            f.values_.push_back(val);
            f.breaks_.push_back(f.breaks_.back() + len);
        }
    }
    if (f.values_.empty()) throw EmptyRegion("step function needs at least one piece");
    return f;
}

Rational StepFunction::at(const Rational& t) const {
    if (t.sign() < 0 || t >= domain_length())
        throw Error("step function evaluated outside (0, m)");
    // Piece i covers [breaks[i], breaks[i+1]); binary search for t.
    size_t lo = 0, hi = values_.size() - 1;
    while (lo < hi) {
        size_t mid = (lo + hi + 1) / 2;
        if (breaks_[mid] <= t) lo = mid;
        else hi = mid - 1;
    }
    return values_[lo];
}

Rational StepFunction::measure_above(const Rational& alpha) const {
    Rational m(0);
    for (size_t i = 0; i < values_.size(); ++i)
        if (values_[i] > alpha) m += breaks_[i + 1] - breaks_[i];
    return m;
}

Rational StepFunction::measure_at_least(const Rational& alpha) const {
    Rational m(0);
    for (size_t i = 0; i < values_.size(); ++i)
        if (values_[i] >= alpha) m += breaks_[i + 1] - breaks_[i];
    return m;
}

Rational StepFunction::measure_equal(const Rational& alpha) const {
    Rational m(0);
    for (size_t i = 0; i < values_.size(); ++i)
        if (values_[i] == alpha) m += breaks_[i + 1] - breaks_[i];
    return m;
}

std::vector<std::pair<Rational, Rational>> StepFunction::pieces() const {
    std::vector<std::pair<Rational, Rational>> out;
    for (size_t i = 0; i < values_.size(); ++i)
        out.emplace_back(breaks_[i + 1] - breaks_[i], values_[i]);
    return out;
}

DistributionFunction distribution(const WeightedValues& wv) {
    // Collapse to |value| atoms first.
    std::vector<WeightedValue> absolute;
    absolute.reserve(wv.atoms.size());
    for (const auto& a : wv.atoms) absolute.push_back({a.value.abs(), a.weight});
    WeightedValues abs_sorted = sort_and_merge(std::move(absolute));

    DistributionFunction d;
    d.total = abs_sorted.total;
    Rational above = abs_sorted.total;
    for (const auto& a : abs_sorted.atoms) {
        above -= a.weight;
        d.thresholds.push_back(a.value);
        d.measures.push_back(above);  // lambda({|f| > value}) drops after the atom
    }
    return d;
}

Rational DistributionFunction::measure_above(const Rational& alpha) const {
    // Right-continuous: lambda({|f| > alpha}) = total minus mass at or below alpha.
    Rational m = total;
    for (size_t i = 0; i < thresholds.size(); ++i) {
        if (thresholds[i] <= alpha) m = measures[i];
        else break;
    }
    return m;
}

StepFunction rearrange(const WeightedValues& wv) {
    if (wv.empty()) throw EmptyRegion();
    std::vector<WeightedValue> absolute;
    absolute.reserve(wv.atoms.size());
    for (const auto& a : wv.atoms) absolute.push_back({a.value.abs(), a.weight});
    WeightedValues abs_sorted = sort_and_merge(std::move(absolute));

    std::vector<std::pair<Rational, Rational>> pieces;
    for (auto it = abs_sorted.atoms.rbegin(); it != abs_sorted.atoms.rend(); ++it)
        pieces.emplace_back(it->weight, it->value);
    return StepFunction::from_pieces(std::move(pieces));
}

StepFunction rearrange(const GridFunction& f, const CellSet& e) {
    return rearrange(restrict(f, e));
}

PropertySuiteReport property_suite(const GridFunction& f, const CellSet& e) {
    WeightedValues wv = restrict(f, e);
    StepFunction star = rearrange(wv);
    DistributionFunction dist = distribution(wv);

    // Test levels: every |value| of f plus midpoints between consecutive
    // levels, plus 0. Between levels both sides are constant, so this grid
    // is exhaustive.
    std::vector<Rational> levels;
    levels.push_back(Rational(0));
    for (size_t i = 0; i < dist.thresholds.size(); ++i) {
        levels.push_back(dist.thresholds[i]);
        if (i + 1 < dist.thresholds.size())
            levels.push_back((dist.thresholds[i] + dist.thresholds[i + 1]) / Rational(2));
    }
    if (!dist.thresholds.empty())
        levels.push_back(dist.thresholds.back() + Rational(1));

    auto side_measure = [&](const Rational& alpha, int mode) {
        // mode 0: {|f|>a}, 1: {|f|>=a}, 2: {|f|=a}, on the weighted atoms.
        Rational m(0);
        for (const auto& a : wv.atoms) {
            Rational v = a.value.abs();
            if ((mode == 0 && v > alpha) || (mode == 1 && v >= alpha) || (mode == 2 && v == alpha))
                m += a.weight;
        }
        return m;
    };

    PropertySuiteReport report;
    auto clause = [&](const std::string& name, bool ok, const std::string& note) {
        report.clauses.push_back({name, ok, note});
    };

    bool gt_ok = true, ge_ok = true, eq_ok = true, iv_ok = true;
    for (const auto& alpha : levels) {
        if (star.measure_above(alpha) != side_measure(alpha, 0)) gt_ok = false;
        if (star.measure_at_least(alpha) != side_measure(alpha, 1)) ge_ok = false;
        if (star.measure_equal(alpha) != side_measure(alpha, 2)) eq_ok = false;
        // {t : f*(t) > alpha} must be the initial interval (0, f_*(alpha)):
        // since f* is non-increasing this reduces to two exact checks.
        Rational fstar_alpha = dist.measure_above(alpha);
        if (star.measure_above(alpha) != fstar_alpha) iv_ok = false;
        if (!fstar_alpha.is_zero() && fstar_alpha < star.domain_length()) {
            // value just left of f_*(alpha) is > alpha, value at f_*(alpha) is <= alpha
            if (!(star.at(fstar_alpha) <= alpha)) iv_ok = false;
        }
    }
    clause("distribution >", gt_ok, "lambda({f*>a}) = lambda({|f|>a})");
    clause("distribution >=", ge_ok, "lambda({f*>=a}) = lambda({|f|>=a})");
    clause("distribution =", eq_ok, "lambda({f*=a}) = lambda({|f|=a})");
    clause("superlevel interval", iv_ok, "{f*>a} = (0, f_*(a))");
    return report;
}

std::pair<Rational, Rational> interval_equimeasure(const GridFunction& g, const CellSet& q,
                                                   const Rational& c, const Rational& alpha) {
    WeightedValues wv = restrict(g, q);
    for (const auto& a : wv.atoms)
        if (a.value.is_negative()) throw NegativeValues("interval_equimeasure needs g >= 0");
    if (alpha.is_negative()) throw Error("alpha must be non-negative");

    StepFunction star = rearrange(wv);
    Rational left(0);
    auto pieces = star.pieces();
    for (const auto& [len, v] : pieces)
        if ((v - c).abs() <= alpha) left += len;

    Rational right(0);
    for (const auto& a : wv.atoms)
        if ((a.value - c).abs() <= alpha) right += a.weight;

    return {left, right};
}

}  // namespace bmolab
