#pragma once

#include <vector>

#include "bmolab/errors.hpp"
#include "bmolab/rational.hpp"

namespace bmolab {

/// Piecewise-linear map given as a breakpoint table, extended by constants
/// beyond the table. Construction rejects tables whose slope exceeds 1 in
/// absolute value, so every instance is 1-Lipschitz.
class PiecewiseLinear {
  public:
    PiecewiseLinear(std::vector<Rational> xs, std::vector<Rational> ys);

    static PiecewiseLinear identity(const Rational& lo, const Rational& hi);
    static PiecewiseLinear clamp(const Rational& lo, const Rational& hi);
    /// t -> max(t, 0) on [lo, hi] (lo may be negative).
    static PiecewiseLinear relu(const Rational& lo, const Rational& hi);

    Rational operator()(const Rational& x) const;

  private:
    std::vector<Rational> xs_;
    std::vector<Rational> ys_;
};

}  // namespace bmolab
