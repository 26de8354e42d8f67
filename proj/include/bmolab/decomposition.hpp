#pragma once

#include <string>

#include "bmolab/grid.hpp"

namespace bmolab {

/// Equal-measure recursive splitting rule.
///  - Dyadic: a cube splits into its 2^d dyadic children (multiplicity 2^d).
///  - FalseCube: a special rectangle splits into two halves across the
///    lowest doubled axis, or axis 0 when all sides are equal (multiplicity 2).
struct DecompositionSpec {
    enum class Rule { Dyadic, FalseCube };
    Rule rule = Rule::Dyadic;

    int multiplicity(int dim) const { return rule == Rule::Dyadic ? 1 << dim : 2; }
    /// Constructive bi-density constant of the splitting tree: (1/M)(1-1/M).
    Rational tree_delta(int dim) const;
};

std::vector<Region> children(const Region& r, DecompositionSpec::Rule rule);

/// Three disjoint cell sets covering the whole grid.
struct TriPartition {
    CellSet eplus;
    CellSet eminus;
    CellSet gap;

    TriPartition(CellSet p, CellSet m, CellSet g);
    const GridSpec& spec() const { return eplus.spec(); }
};

/// Result of a balancing search, re-checkable from scratch.
struct BalanceCertificate {
    Region region;
    Rational frac_plus;    // lambda(E+ cap W) / lambda(W)
    Rational frac_minus;   // lambda(E- cap W) / lambda(W)
    QuadReal certified_s;  // guaranteed lower bound for min of the fractions
    std::string case_tag;  // bidensity | full-child | unbalanced-child
    QuadReal tau_used;
    Rational delta;
    int multiplicity = 0;

    Rational min_fraction() const { return frac_plus < frac_minus ? frac_plus : frac_minus; }
};

/// Dyadic bi-density cube of the constructive lemma: a dyadic subcube W of Q
/// with min{lambda(W cap E), lambda(W \ E)} >= 2^-d (1 - 2^-d) lambda(W).
/// Walks the dyadic ancestor chain of a cell buried in E (or its complement)
/// after an exhaustive two-sided pre-pass.
Region bidensity_dyadic(const CellSet& e, const AxisCube& q);

/// Same construction over an arbitrary splitting tree; bound (1/M)(1-1/M).
Region bidensity_tree(const CellSet& e, const Region& root, DecompositionSpec::Rule rule);

struct ContinuousBidensityResult {
    Region region;
    Rational fraction;   // lambda(W cap E) / lambda(W)
    Rational tolerance;  // 1 - (n/(n+1))^d at the side length used
};

/// Grid analog of the continuous cube family: walks a translation path of
/// side-2^refine cubes from a cell inside E to one outside and returns the
/// best intermediate, |fraction - target| <= tolerance.
ContinuousBidensityResult bidensity_continuous(const CellSet& e, const AxisCube& q,
                                               const Rational& target, int refine);

/// The chain-descent balancing act: under min{lambda(E+),lambda(E-)} >
/// tau lambda(G), produces W from the rule with both fractions >= s where
///   s = min{ (tau - tau^2) / (M (1+tau)), delta }   for tau <= sqrt2 - 1,
/// and tau is clamped to sqrt2 - 1 above that.
BalanceCertificate chain_descent(const TriPartition& part, DecompositionSpec rule,
                                 const QuadReal& tau);

/// The certified (tau, s) pair for a collection: tau = sqrt2 - 1 and
/// s = 2^-d (3 - 2 sqrt2) for cubes/dyadic cubes, (3 - 2 sqrt2)/2 for
/// special rectangles.
struct CertifiedPair {
    QuadReal tau;
    QuadReal s;
};

CertifiedPair certified_pair(int dim, CollectionKind kind);

}  // namespace bmolab
