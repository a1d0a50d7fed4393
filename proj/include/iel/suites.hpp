#pragma once

#include <string>
#include <vector>

#include "iel/diagnostics.hpp"
#include "iel/dynamics.hpp"

namespace iel {

/// One measured quantity checked against the closed interval [lower, upper].
struct CheckResult {
    std::string suite;
    std::string name;
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool passed = false;
};

/// "oracles", "commutation", "sobolev", "duhamel".
std::vector<std::string> suite_names();

/// Runs one named suite, or every suite for "all". Throws ConfigError on other names.
std::vector<CheckResult> run_suite(const std::string& name);

/// Short label of a commuting field: S, d_t, d_1, Omega_3, ...
std::string op_label(const VectorFieldOp& op);

/// Snapshots s, step(s), step(step(s)), ... with a fixed-step stepper.
std::vector<State> trajectory(State s, const Params& p, double dt, int steps);

/// Smooth, decaying, non-symmetric 2D coupled data of size eps for residual checks.
State localized_state(const GridPtr& grid, double eps);

}  // namespace iel
