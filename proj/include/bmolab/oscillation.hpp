#pragma once

#include "bmolab/grid.hpp"
#include "bmolab/lipschitz.hpp"

namespace bmolab {

/// The full median set [lo, hi]; canonical median is the lower endpoint.
struct MedianResult {
    Rational lo;
    Rational hi;
    Rational canonical() const { return lo; }
};

/// Mean oscillation O, average deviation A, double-integral D. The chain
/// O <= A <= D <= 2O holds exactly; tests enforce it.
struct OscillationReport {
    Rational o;
    Rational a;
    Rational d;
    Rational median;
    Rational mean;
};

enum class OscFlavor { O, A, D };

OscFlavor parse_osc_flavor(const std::string& name);

MedianResult median(const WeightedValues& wv);
MedianResult median(const GridFunction& f, const CellSet& e);
MedianResult median(const GridFunction& f, const Region& r);

OscillationReport oscillation(const WeightedValues& wv);
OscillationReport oscillation(const GridFunction& f, const CellSet& e);
OscillationReport oscillation(const GridFunction& f, const Region& r);

/// (1/lambda(E)) * integral |f - c| over the weighted restriction.
Rational mean_abs_deviation(const WeightedValues& wv, const Rational& c);

/// max of the flavor over enumerate_regions(kind, refine).
Rational bmo_seminorm(const GridFunction& f, CollectionKind kind, OscFlavor flavor, int refine = 0);

/// |f_E - m| for the canonical median; asserts the bound <= O(f,E) for both
/// median endpoints and throws on violation (it would contradict the theory).
Rational median_vs_mean_gap(const GridFunction& f, const CellSet& e);

}  // namespace bmolab
