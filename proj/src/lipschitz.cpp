#include "bmolab/lipschitz.hpp"

namespace bmolab {

PiecewiseLinear::PiecewiseLinear(std::vector<Rational> xs, std::vector<Rational> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.empty()) throw Error("bad piecewise-linear table");
    for (size_t i = 1; i < xs_.size(); ++i) {
        if (xs_[i] <= xs_[i - 1]) throw Error("table x-coordinates must increase");
        Rational dy = (ys_[i] - ys_[i - 1]).abs();
        Rational dx = xs_[i] - xs_[i - 1];
        if (dy > dx) throw LipschitzViolation();
    }
}

PiecewiseLinear PiecewiseLinear::identity(const Rational& lo, const Rational& hi) {
    return PiecewiseLinear({lo, hi}, {lo, hi});
}

PiecewiseLinear PiecewiseLinear::clamp(const Rational& lo, const Rational& hi) {
    return PiecewiseLinear({lo, hi}, {lo, hi});  // constant extension does the clamping
}

PiecewiseLinear PiecewiseLinear::relu(const Rational& lo, const Rational& hi) {
    if (lo >= Rational(0)) return identity(lo, hi);
    if (hi <= Rational(0)) return PiecewiseLinear({lo, hi}, {Rational(0), Rational(0)});
    return PiecewiseLinear({lo, Rational(0), hi}, {Rational(0), Rational(0), hi});
}

Rational PiecewiseLinear::operator()(const Rational& x) const {
    if (x <= xs_.front()) return ys_.front();
    if (x >= xs_.back()) return ys_.back();
    size_t i = 1;
    while (xs_[i] < x) ++i;
    Rational t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
    return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
}

}  // namespace bmolab
