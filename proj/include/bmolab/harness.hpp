#pragma once

#include "bmolab/decomposition.hpp"
#include "bmolab/john_stromberg.hpp"
#include "bmolab/pair_search.hpp"
#include "bmolab/report.hpp"

namespace bmolab {

/// Constants of an exponential-decay inequality together with the flavor
/// tags that pin down which variant they belong to.
struct JnConstants {
    double b = 0.0;
    double big_b = 1.0;

    enum class Center { Mean, Median } center = Center::Mean;
    enum class Comparison { Strict, NonStrict } comparison = Comparison::Strict;
    enum class Flavor { O, A, D, J } flavor = Flavor::A;
    double j_s = 0.5;  // only meaningful for Flavor::J

    void validate() const {
        if (b <= 0.0) throw InvalidConstants("b must be positive");
        if (big_b < 1.0) throw InvalidConstants("B must be at least 1");
    }
};

JnConstants::Center parse_center(const std::string&);
JnConstants::Comparison parse_comparison(const std::string&);
JnConstants::Flavor parse_flavor(const std::string&);
std::string to_string(JnConstants::Center);
std::string to_string(JnConstants::Comparison);
std::string to_string(JnConstants::Flavor);

/// The distribution inequality in both seminorm flavors:
///   lambda({|f-m| >= a}) <= max{r, 2 sqrt r} lambda(Q) exp(-a log r / (8 ||f||_{J,s}))
/// and the same with exponent -a s log r / (8 ||f||_O).
/// r must lie in [1, 1/(2 tau)].
struct MainJsReport {
    MarginReport j_flavor;
    MarginReport o_flavor;
    Rational j_seminorm;
    Rational o_seminorm;
    bool pass() const { return j_flavor.pass && o_flavor.pass; }
};

MainJsReport verify_mainjs(const GridFunction& f, CollectionKind kind, const JsPair& pair,
                           double r, const std::vector<Rational>& alphas = {});

/// Same computation without pair validation. Negative controls go through
/// here: an s pushed past 1/2 collapses the J-seminorm on nonconstant
/// functions and the reported rows fail as they should.
MainJsReport verify_mainjs_unchecked(const GridFunction& f, CollectionKind kind,
                                     const QuadReal& tau, const QuadReal& s, double r,
                                     const std::vector<Rational>& alphas = {});

/// Level-set breakpoints of |f - median| plus midpoints plus zero: between
/// them the exact LHS is constant, so this grid decides the inequality.
std::vector<Rational> default_alpha_grid(const GridFunction& f);

/// The integer quantizer: 0 on [0, 1/2], n on (n-1/2, n+1/2].
Rational quantizer_phi(const Rational& t);

struct ReductionReport {
    bool addprop_plus = false;   // lambda({g+ > 0}) <= lambda(Q)/2
    bool addprop_minus = false;
    bool phi_steps_ok = false;   // phi(t) - phi(s) in {0,1} for 0<=s<=t<=s+1/2
    bool phi_floor_ok = false;   // phi(t) >= t - 1/2
    bool quantized_seminorm_ok = false;  // ||phi o f~|| <= 1/2 when ||f~|| < 1/3
    Rational scaled_seminorm;    // ||f~||, the rescaled positive part
    Rational quantized_seminorm;
    bool trivial = false;        // positive part constant: nothing to quantize
    bool pass() const {
        return addprop_plus && addprop_minus && phi_steps_ok && phi_floor_ok &&
               (trivial || quantized_seminorm_ok);
    }
};

/// Steps of the reduction to non-negative integer-valued functions:
/// median split, quantizer properties, and the seminorm-halving bound.
ReductionReport reduction_pipeline_check(const GridFunction& f, CollectionKind kind,
                                         const Rational& s);

struct TransferReport {
    Rational lhs;  // ||f*||_{J,sigma} over all subintervals of (0, lambda(Q))
    Rational rhs;  // ||f||_{J,s} over the collection
    bool pass = false;
};

/// Rearrangement transfer for integer-valued f with ||f||_{J,s} <= 1/2 and
/// sigma in (2 tau/(1+2 tau), 1/2].
TransferReport rearrangement_transfer_check(const GridFunction& f, CollectionKind kind,
                                            const JsPair& pair, const Rational& sigma);

struct NinverseReport {
    bool applicable = false;        // measure hypothesis for the implied tau
    bool star_shape_ok = false;     // f* = 2, 1, 0 on the predicted pieces
    Rational star_seminorm;         // ||f*||_{J,sigma} over subintervals
    Rational f_seminorm;            // ||f||_{J,s} over the collection
    bool transfer_holds = false;    // star <= f seminorm
    std::optional<Region> witness;  // region with J(f,W,s) = ||f||
    Rational witness_min_fraction;
    bool balanced = false;          // min fraction >= s lambda(W)
};

/// Builds f = 2 chi_{E-} + chi_G (roles swapped so E- is the smaller set),
/// checks the transfer inequality, and when it holds extracts the balanced
/// region the converse argument promises.
NinverseReport ninverse_probe(const CellSet& eplus, const CellSet& eminus, const CellSet& gap,
                              CollectionKind kind, const Rational& sigma, const Rational& s);

/// One conversion step between inequality variants. Center swaps multiply B
/// by e^b, O/A/D flavor swaps rescale b by the 2-equivalences, J converts
/// only toward O/A/D (via the s factor); strictness never changes constants.
JnConstants convert_constants(const JnConstants& from, JnConstants::Center center,
                              JnConstants::Comparison comparison, JnConstants::Flavor flavor,
                              double flavor_s = 0.5);

/// The median-flavor constants reproduced from the special-rectangle route
/// (b = ln 2 / (32 (2 + 6 sqrt(d/pi))), B = 2), plus the mean-flavor B = 2 e^b.
JnConstants wik_constants(int dim);

struct WikComparison {
    double ours_prefactor;   // 2 / sqrt(2 sqrt2 - 2)            ~ 2.197
    double ours_decay;       // (3-2 sqrt2) ln(1/(2 sqrt2-2))/16 ~ 0.002
    double wik_prefactor;    // 2
    double wik_decay;        // ln2/16                           ~ 0.043
    std::string ours_prefactor_form;
    std::string ours_decay_form;
    std::string wik_decay_form;
};

WikComparison wik_comparison();

}  // namespace bmolab
