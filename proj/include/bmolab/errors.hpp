#pragma once

#include <stdexcept>
#include <string>

namespace bmolab {

// Precondition failures carry the name used throughout the interface docs so
// callers (and the CLI exit-code mapping) can dispatch on type.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyRegion : Error {
    explicit EmptyRegion(const std::string& msg = "region has zero measure") : Error(msg) {}
};

struct DimMismatch : Error {
    explicit DimMismatch(const std::string& msg = "dimension mismatch") : Error(msg) {}
};

struct NegativeValues : Error {
    explicit NegativeValues(const std::string& msg = "function must be non-negative") : Error(msg) {}
};

struct LipschitzViolation : Error {
    explicit LipschitzViolation(const std::string& msg = "table slope exceeds 1") : Error(msg) {}
};

struct GridIncompatible : Error {
    explicit GridIncompatible(const std::string& msg = "transform not representable on grid") : Error(msg) {}
};

struct DegenerateSet : Error {
    explicit DegenerateSet(const std::string& msg = "set is degenerate for this operation") : Error(msg) {}
};

struct HypothesisViolated : Error {
    explicit HypothesisViolated(const std::string& msg = "hypothesis violated") : Error(msg) {}
};

struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& msg = "search budget exceeded") : Error(msg) {}
};

struct PairUnsupported : Error {
    explicit PairUnsupported(const std::string& msg = "(tau,s) pair not supported") : Error(msg) {}
};

struct InvalidConstants : Error {
    explicit InvalidConstants(const std::string& msg = "invalid constants") : Error(msg) {}
};

struct UnsupportedKind : Error {
    explicit UnsupportedKind(const std::string& msg = "collection kind out of scope") : Error(msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

}  // namespace bmolab
