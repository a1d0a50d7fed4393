#pragma once

#include <vector>

#include "iel/dynamics.hpp"

namespace iel {

struct StepperConfig {
    /// Step size; nonpositive means "use stability_dt".
    double dt = 0.0;
    double cfl_safety = 0.5;
    double constraint_tol = 1e-12;
    double blowup_energy_factor = 1e4;
};

struct Renormalized {
    State state;
    /// max | |d| - 1 | before projection.
    double drift = 0.0;
};

/// d <- d/|d|, q <- q - (q.d) d. Throws ConstraintError if |d| < 0.5 anywhere.
Renormalized renormalize_constraints(const State& s);

/// Integrating-factor Heun scheme.
///
/// Viscosity (e^{-mu k^2 h}) and the linear wave operator d_tt d = lap d / sigma0
/// are propagated exactly per mode; everything else is explicit. The state is
/// renormalized onto the sphere after each full step.
class Stepper {
public:
    Stepper(GridPtr grid, Params params, double dt);

    double dt() const { return dt_; }
    const Params& params() const { return params_; }
    /// One step. Writes the pre-projection drift to `drift` when given.
    State step(const State& s, double* drift = nullptr) const;

    /// Explicit part of the right-hand side: (velocity, director velocity).
    struct Forcing {
        VectorField v;
        DirectorField q;
    };
    Forcing nonlinear(const State& s) const;

private:
    State propagate(const State& s) const;

    GridPtr grid_;
    Params params_;
    double dt_;
    std::vector<double> heat_;
    std::vector<double> cos_;
    std::vector<double> sin_over_w_;
    std::vector<double> w_sin_;
};

/// One step with cfg.dt (or stability_dt if cfg.dt <= 0).
State step(const State& s, const Params& p, const StepperConfig& cfg, double* drift = nullptr);

/// cfl_safety * min(dx sqrt(sigma0), dx / max|v|).
double stability_dt(const Grid& g, const Params& p, const State& s, double cfl_safety = 0.5);

/// Non-finite values, or total_energy above blowup_energy_factor * baseline.
bool detect_blowup(const State& s, double baseline_energy, const StepperConfig& cfg);

}  // namespace iel
