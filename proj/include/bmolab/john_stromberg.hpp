#pragma once

#include <optional>

#include "bmolab/grid.hpp"
#include "bmolab/lipschitz.hpp"
#include "bmolab/oscillation.hpp"
#include "bmolab/rearrangement.hpp"
#include "bmolab/report.hpp"

namespace bmolab {

/// Parameter bundle for the J functional.
struct JsParams {
    Rational s;

    explicit JsParams(Rational s_) : s(s_) {
        if (s.sign() <= 0 || s >= Rational(1)) throw Error("s must lie in (0,1)");
    }
    Rational rho() const { return s / (Rational(1) - s); }
    void require_at_most_half() const {
        if (s > Rational(1, 2)) throw HypothesisViolated("this application needs s <= 1/2");
    }
};

/// J(f,E,s) from the definition: smallest half-width of a value window
/// capturing strictly more than (1-s) of the mass. Exact, works for signed f.
Rational j_functional_def(const WeightedValues& wv, const Rational& s);
Rational j_functional_def(const GridFunction& f, const CellSet& e, const Rational& s);

/// J via the rearrangement formula: half the minimal drop of f* over windows
/// of length (1-s)*lambda(E). Requires f >= 0 on E.
Rational j_functional_rearr(const GridFunction& f, const CellSet& e, const Rational& s);

/// Same formula applied directly to a non-increasing right-continuous step
/// function on (0, q) (part (i) of the two-route equivalence).
Rational j_functional_step(const StepFunction& h, const Rational& s);

/// sup of J over the region collection.
Rational j_seminorm(const GridFunction& f, CollectionKind kind, const Rational& s, int refine = 0);

/// Exact sup of J(h,(a,b),s) over ALL subintervals of (0, m) for a step
/// function h. Decides each candidate level by a two-variable rational LP
/// over the breakpoint cells, so no grid of trial intervals is involved.
Rational step_interval_j_seminorm(const StepFunction& h, const Rational& s);

struct SlackReport {
    Rational lhs;
    Rational rhs;
    Rational slack;  // rhs - lhs, >= 0 when the inequality holds
    bool pass = true;
};

/// J-seminorm <= O-seminorm / s for s in (0, 1/2].
SlackReport chebyshev_bound_check(const GridFunction& f, CollectionKind kind, const Rational& s,
                                  int refine = 0);

/// J(phi o f, E, s) <= J(f, E, s) for a 1-Lipschitz table phi.
SlackReport lipschitz_j_check(const GridFunction& f, const PiecewiseLinear& phi, const CellSet& e,
                              const Rational& s);

/// x -> r x + x0 with r = sign * 2^log2_scale and dyadic shift.
struct AffineMap {
    int log2_scale = 0;
    bool negate = false;
    std::vector<Rational> shift;
};

/// Pullback g(x) = f(r x + x0) realized exactly on its own grid, plus the
/// cell-level correspondence back to (a refinement of) f's grid.
struct AffinePullback {
    GridFunction g;            // on pullback grid
    GridFunction f_refined;    // f expressed at the alignment level
    std::vector<long long> g_to_f;  // g-cell -> f_refined-cell, -1 if outside
    CellSet map_set(const CellSet& e_on_g) const;
};

AffinePullback make_affine_pullback(const GridFunction& f, const AffineMap& map);

struct AffineCheckReport {
    Rational j_pullback;
    Rational j_image;
    bool equal = false;
};

/// J(g, E, s) = J(f, rE + x0, s), both sides exact.
AffineCheckReport affine_covariance_check(const GridFunction& f, const AffineMap& map,
                                          const CellSet& e_on_g, const Rational& s);

struct MonotoneDifferenceReport {
    Rational sup_difference;    // sup_{t in (0,1/2]} h(rho t) - h(t)
    Rational twice_j_seminorm;  // 2 * exact interval J-seminorm
    bool pass = false;
};

/// h non-increasing right-continuous on (0,1), s in (0,1/2).
MonotoneDifferenceReport monotone_difference_bound(const StepFunction& h, const Rational& s);

/// Tail bound for a non-increasing h on I = (0, m):
///   |{t : h(t) - h(m/2) >= alpha}| <=
///       (1-s)/(2s) * |I| * exp(-alpha log(1/s - 1) / (2 ||h||_{J,s})).
/// At alpha = 0 the left set is clipped to (0, m/2]: only there is it an
/// initial interval, and the bound is vacuous there anyway.
MarginReport monotone_tail_bound(const StepFunction& h, const Rational& s,
                                 const std::vector<Rational>& alphas);

}  // namespace bmolab
