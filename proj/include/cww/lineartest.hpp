#pragma once

#include <string>
#include <vector>

#include "cww/multipoly.hpp"

namespace cww {

// Outcome of the partial-sum non-negativity test. A Fail carries the
// variable-elimination path (outermost first) and the negative constant
// reached, which reproduces the failure exactly.
struct TestReport {
    enum class Verdict { Pass, Fail };
    struct PathEntry {
        std::string var;
        unsigned step;  // elimination count completed for this variable
    };

    Verdict verdict = Verdict::Pass;
    std::vector<PathEntry> failure_path;
    Rational failure_value;  // the negative partial sum witnessing the Fail

    bool passed() const { return verdict == Verdict::Pass; }
    std::string to_string() const;
};

// The partial-sum test for non-negativity on the unit cube [0,1]^n.
//
// For each variable v (the LAST entry of var_order is eliminated in the
// outermost loop, matching the classical one-variable scheme applied
// coordinate-wise): check the sub-test for P(v=0), then replace P by
// P(v=0) + (P - P(v=0))/v, repeating deg_v(P)+1 times. The single-variable
// base case checks P(0) >= 0 at every step. Pass certifies p >= 0 on the
// cube (it verifies non-negativity of all rectangular partial sums of the
// coefficient array); Fail says nothing about the sign.
TestReport linear_test(const MultiPoly& p, const std::vector<std::string>& var_order);
// Convenience: var_order = p.vars().
TestReport linear_test(const MultiPoly& p);

} // namespace cww
