#pragma once

#include <array>

#include "iel/field.hpp"

namespace iel {

/// Coefficients of the director equation sigma0 D_t^2 d + sigma1 D_t d - lap d = lambda d
/// and the viscosity of the momentum equation.
struct Params {
    double sigma0 = 1.0;
    double sigma1 = 0.0;
    double mu = 1.0;
    std::array<double, 3> e{0.0, 0.0, 1.0};

    /// Throws ConfigError on sigma0 <= 0, sigma1 < 0, mu <= 0 or |e| != 1.
    void validate() const;

    bool operator==(const Params&) const = default;
};

/// (v, d, q = d_t d) at time t. v has dim components; d and q always have three.
struct State {
    VectorField v;
    DirectorField d;
    DirectorField q;
    double t = 0.0;

    const GridPtr& grid_ptr() const { return d[0].grid_ptr(); }
    const Grid& grid() const { return d[0].grid(); }

    /// v = 0, d = e, q = 0.
    static State equilibrium(const GridPtr& grid, const std::array<double, 3>& e = {0.0, 0.0, 1.0});
};

/// div(grad d (x) grad d) with (grad d (x) grad d)_ij = d_i d . d_j d.
VectorField ericksen_stress_div(const DirectorField& d);

/// d_t v = P[-v.grad v + mu lap v - div(grad d (x) grad d)]. Rejects dim = 1.
VectorField momentum_rhs(const State& s, const Params& p);

/// lambda = |grad d|^2 - sigma0 |q + v.grad d|^2.
ScalarField lagrange_multiplier(const State& s, const Params& p);

/// d_t q. `dv_dt` must come from momentum_rhs on the same state (ignored in 1D).
DirectorField director_rhs(const State& s, const Params& p, const VectorField& dv_dt);
/// Convenience overload evaluating momentum_rhs internally (or zero in 1D).
DirectorField director_rhs(const State& s, const Params& p);

/// grad p = (Id - P)[-v.grad v - div(grad d (x) grad d)]. Rejects dim = 1.
VectorField pressure_gradient(const State& s, const Params& p);

/// Integral of |v|^2 + |q|^2 + |grad d|^2.
double total_energy(const State& s);

}  // namespace iel
