#pragma once

#include <string>
#include <vector>

#include "bmolab/rational.hpp"

namespace bmolab {

/// One row of an inequality check: exact LHS against a transcendental RHS.
struct MarginRow {
    Rational alpha;
    Rational lhs;        // exact measure
    double rhs = 0.0;    // bound side, evaluated in double
    double slack = 0.0;  // rhs - lhs
    bool pass = true;
    std::string note;
};

/// RHS comparisons allow this much slack; the LHS is exact.
constexpr double kRhsSlack = 1e-12;

struct MarginReport {
    std::string name;
    std::vector<MarginRow> rows;
    bool pass = true;

    void add(MarginRow row) {
        pass = pass && row.pass;
        rows.push_back(std::move(row));
    }
};

}  // namespace bmolab
