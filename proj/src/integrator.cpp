#include "iel/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iel/errors.hpp"
#include "iel/rhs.hpp"
#include "iel/spectral.hpp"

namespace iel {

Renormalized renormalize_constraints(const State& s) {
    Renormalized r{s, 0.0};
    auto& d = r.state.d;
    auto& q = r.state.q;
    const std::size_t n = d[0].size();
    double drift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double norm = std::sqrt(d[0][i] * d[0][i] + d[1][i] * d[1][i] + d[2][i] * d[2][i]);
        if (!(norm >= 0.5)) throw ConstraintError("director collapsed: |d| < 0.5");
        drift = std::max(drift, std::abs(norm - 1.0));
        const double inv = 1.0 / norm;
        for (int c = 0; c < 3; ++c) d[c][i] *= inv;
        const double qd = q[0][i] * d[0][i] + q[1][i] * d[1][i] + q[2][i] * d[2][i];
        for (int c = 0; c < 3; ++c) q[c][i] -= qd * d[c][i];
    }
    r.drift = drift;
    return r;
}

Stepper::Stepper(GridPtr grid, Params params, double dt)
    : grid_(std::move(grid)), params_(params), dt_(dt) {
    params_.validate();
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");
    const std::size_t m = grid_->spectral_size();
    heat_.resize(m);
    cos_.resize(m);
    sin_over_w_.resize(m);
    w_sin_.resize(m);
    const double c = 1.0 / std::sqrt(params_.sigma0);
    for (std::size_t idx = 0; idx < m; ++idx) {
        const double k2 = grid_->k_squared(idx);
        heat_[idx] = std::exp(-params_.mu * k2 * dt_);
        const double w = c * std::sqrt(k2);
        cos_[idx] = std::cos(w * dt_);
        sin_over_w_[idx] = w > 0.0 ? std::sin(w * dt_) / w : dt_;
        w_sin_[idx] = w * std::sin(w * dt_);
    }
}

State Stepper::propagate(const State& s) const {
    State out = s;
    if (grid_->dim() >= 2) {
        for (int a = 0; a < s.v.size(); ++a) {
            SpectralField f = forward(s.v[a]);
            for (std::size_t idx = 0; idx < f.size(); ++idx) f[idx] *= heat_[idx];
            out.v[a] = inverse(f);
        }
    }
    for (int c = 0; c < 3; ++c) {
        const SpectralField d = forward(s.d[c]);
        const SpectralField q = forward(s.q[c]);
        SpectralField d1(grid_), q1(grid_);
        for (std::size_t idx = 0; idx < d.size(); ++idx) {
            d1[idx] = cos_[idx] * d[idx] + sin_over_w_[idx] * q[idx];
            q1[idx] = -w_sin_[idx] * d[idx] + cos_[idx] * q[idx];
        }
        out.d[c] = inverse(d1);
        out.q[c] = inverse(q1);
    }
    out.t = s.t + dt_;
    return out;
}

Stepper::Forcing Stepper::nonlinear(const State& s) const {
    const auto gd = rhs::gradients(s.d);
    const rhs::Coefficients coeffs{params_.sigma0, params_.sigma1, grid_->dim() >= 2};
    Forcing f;
    if (grid_->dim() >= 2) {
        const VectorField adv = rhs::transport(s.v, rhs::gradients(s.v));
        const VectorField st = rhs::stress_div(gd);
        VectorField nl;
        for (int i = 0; i < s.v.size(); ++i) nl.push_back(-1.0 * (adv[i] + st[i]));
        f.v = ops::project_rhs(nl, s.v, 0.0);
        VectorField dv_dt = f.v;
        for (int i = 0; i < s.v.size(); ++i) dv_dt[i].axpy(params_.mu, ops::lap(s.v[i]));
        f.q = rhs::director_nonlinear(s.v, s.d, s.q, dv_dt, gd, coeffs);
    } else {
        f.v = zero_vector(grid_, 1);
        f.q = rhs::director_nonlinear(s.v, s.d, s.q, s.v, gd, coeffs);
    }
    return f;
}

State Stepper::step(const State& s, double* drift) const {
    const bool with_v = grid_->dim() >= 2;
    const double h = dt_;
    const Forcing n0 = nonlinear(s);

    State a = s;
    if (with_v) a.v.axpy(h, n0.v);
    a.q.axpy(h, n0.q);
    const State star = propagate(a);

    State b = s;
    if (with_v) b.v.axpy(0.5 * h, n0.v);
    b.q.axpy(0.5 * h, n0.q);
    State next = propagate(b);

    const Forcing n1 = nonlinear(star);
    if (with_v) next.v.axpy(0.5 * h, n1.v);
    next.q.axpy(0.5 * h, n1.q);

    if (!all_finite(next.v) || !all_finite(next.d) || !all_finite(next.q))
        throw BlowupError("non-finite values after step", s.t);
    Renormalized r = renormalize_constraints(next);
    if (drift) *drift = r.drift;
    r.state.t = s.t + h;
    return std::move(r.state);
}

State step(const State& s, const Params& p, const StepperConfig& cfg, double* drift) {
    const double dt = cfg.dt > 0.0 ? cfg.dt : stability_dt(s.grid(), p, s, cfg.cfl_safety);
    return Stepper(s.grid_ptr(), p, dt).step(s, drift);
}

double stability_dt(const Grid& g, const Params& p, const State& s, double cfl_safety) {
    const double dx = g.spacing();
    double bound = dx * std::sqrt(p.sigma0);
    const double vmax = g.dim() >= 2 ? max_magnitude(s.v) : 0.0;
    if (vmax > 0.0) bound = std::min(bound, dx / vmax);
    return cfl_safety * bound;
}

bool detect_blowup(const State& s, double baseline_energy, const StepperConfig& cfg) {
    if (!all_finite(s.v) || !all_finite(s.d) || !all_finite(s.q)) return true;
    const double e = total_energy(s);
    if (!std::isfinite(e)) return true;
    return e > cfg.blowup_energy_factor * baseline_energy;
}

}  // namespace iel
