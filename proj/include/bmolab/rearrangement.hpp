#pragma once

#include <utility>
#include <vector>

#include "bmolab/grid.hpp"

namespace bmolab {

/// Right-continuous non-increasing step function on (0, m):
/// value values[i] on [breaks[i], breaks[i+1]), with breaks[0] = 0,
/// breaks[k] = m and strictly decreasing values.
class StepFunction {
  public:
    StepFunction() = default;

    /// Builds the canonical form: merges equal-value runs, checks monotonicity.
    static StepFunction from_pieces(std::vector<std::pair<Rational, Rational>> length_value_pairs);

    const std::vector<Rational>& breaks() const { return breaks_; }
    const std::vector<Rational>& values() const { return values_; }
    size_t piece_count() const { return values_.size(); }
    Rational domain_length() const { return breaks_.empty() ? Rational(0) : breaks_.back(); }

    /// f*(t) for t in (0, m); right-continuous, so the value at a breakpoint
    /// is the value of the piece that starts there.
    Rational at(const Rational& t) const;

    /// |{t in (0,m) : f*(t) > alpha}| etc., all exact.
    Rational measure_above(const Rational& alpha) const;
    Rational measure_at_least(const Rational& alpha) const;
    Rational measure_equal(const Rational& alpha) const;

    /// As [(length, value)] pairs in domain order.
    std::vector<std::pair<Rational, Rational>> pieces() const;

    bool operator==(const StepFunction& o) const = default;

  private:
    std::vector<Rational> breaks_;  // 0 = b0 < b1 < ... < bk = m
    std::vector<Rational> values_;  // strictly decreasing
};

/// Distribution function of |f| on E: alpha -> lambda({|f| > alpha}).
struct DistributionFunction {
    std::vector<Rational> thresholds;  // distinct |values|, increasing
    std::vector<Rational> measures;    // lambda({|f| > thresholds[i]})
    Rational total;                    // lambda(E)

    Rational measure_above(const Rational& alpha) const;
};

DistributionFunction distribution(const WeightedValues& wv);

/// Non-increasing rearrangement of |f| on E, equidistributed with |f|.
StepFunction rearrange(const WeightedValues& wv);
StepFunction rearrange(const GridFunction& f, const CellSet& e);

/// Pass/fail record for one clause of the rearrangement property suite.
struct PropertyClause {
    std::string name;
    bool pass = true;
    std::string note;
};

struct PropertySuiteReport {
    std::vector<PropertyClause> clauses;
    bool all_pass() const {
        for (const auto& c : clauses)
            if (!c.pass) return false;
        return true;
    }
};

/// Checks the distribution identities for {>a}, {>=a}, {=a} and the
/// open-interval description of {f* > a}, at every value level of f and at
/// midpoints between consecutive levels.
PropertySuiteReport property_suite(const GridFunction& f, const CellSet& e);

/// Both sides of the equimeasurability identity
///   |{t : |g*(t)-c| <= alpha}| = lambda({x in Q : |g(x)-c| <= alpha});
/// requires g >= 0 on Q. Returns (left, right); they are asserted equal by
/// callers/tests rather than here.
std::pair<Rational, Rational> interval_equimeasure(const GridFunction& g, const CellSet& q,
                                                   const Rational& c, const Rational& alpha);

}  // namespace bmolab
