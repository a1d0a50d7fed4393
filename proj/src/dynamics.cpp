#include "iel/dynamics.hpp"

#include <cmath>

#include "iel/errors.hpp"
#include "iel/rhs.hpp"
#include "iel/spectral.hpp"

namespace iel {

void Params::validate() const {
    if (!(sigma0 > 0.0)) throw ConfigError("sigma0 must be positive (parabolic regime unsupported)");
    if (!(sigma1 >= 0.0)) throw ConfigError("sigma1 must be nonnegative");
    if (!(mu > 0.0)) throw ConfigError("mu must be positive");
    const double n = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
    if (std::abs(n - 1.0) > 1e-12) throw ConfigError("equilibrium director must be a unit vector");
}

State State::equilibrium(const GridPtr& grid, const std::array<double, 3>& e) {
    State s;
    s.v = zero_vector(grid, grid->dim());
    for (int c = 0; c < 3; ++c) {
        s.d.push_back(ScalarField(grid, e[c]));
        s.q.push_back(ScalarField(grid));
    }
    return s;
}

VectorField ericksen_stress_div(const DirectorField& d) {
    return rhs::stress_div(rhs::gradients(d));
}

VectorField momentum_rhs(const State& s, const Params& p) {
    if (s.grid().dim() < 2) throw DomainError("momentum equation needs dim >= 2");
    return rhs::momentum(s.v, rhs::gradients(s.d), p.mu);
}

ScalarField lagrange_multiplier(const State& s, const Params& p) {
    const auto gd = rhs::gradients(s.d);
    DirectorField w = s.q;
    if (s.grid().dim() >= 2) w += rhs::transport(s.v, gd);
    return rhs::multiplier(gd, w, p.sigma0);
}

DirectorField director_rhs(const State& s, const Params& p, const VectorField& dv_dt) {
    if (!(p.sigma0 > 0.0)) throw ConfigError("sigma0 = 0 is out of scope");
    const rhs::Coefficients c{p.sigma0, p.sigma1, s.grid().dim() >= 2};
    return rhs::director(s.v, s.d, s.q, dv_dt, rhs::gradients(s.d), c);
}

DirectorField director_rhs(const State& s, const Params& p) {
    if (s.grid().dim() < 2) return director_rhs(s, p, s.v);
    return director_rhs(s, p, momentum_rhs(s, p));
}

VectorField pressure_gradient(const State& s, const Params& p) {
    (void)p;
    if (s.grid().dim() < 2) throw DomainError("pressure needs dim >= 2");
    const VectorField adv = rhs::transport(s.v, rhs::gradients(s.v));
    const VectorField st = ericksen_stress_div(s.d);
    VectorField nl;
    for (int i = 0; i < s.v.size(); ++i) nl.push_back(-1.0 * (adv[i] + st[i]));
    nl = dealias_truncate(nl);
    return gradient_part(nl);
}

double total_energy(const State& s) {
    double e = norm_sq(s.v) + norm_sq(s.q);
    for (const auto& c : s.d) e += spectral_gradient_norm_sq(forward(c));
    return e;
}

}  // namespace iel
