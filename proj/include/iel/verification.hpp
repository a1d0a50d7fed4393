#pragma once

#include <array>
#include <vector>

#include "iel/diagnostics.hpp"
#include "iel/dynamics.hpp"

namespace iel {

enum class OracleKind { geodesic_wavemap, taylor_green, heat_semigroup };

struct OracleSpec {
    OracleKind kind = OracleKind::geodesic_wavemap;
    double amplitude = 0.1;
    /// Integer wave numbers (in units of 2 pi / L) of the single seeded mode.
    std::array<int, 3> mode{1, 0, 0};
    double mu = 1.0;
    double sigma0 = 1.0;

    /// Throws ConfigError when a geodesic amplitude leaves the hemisphere chart (|u| >= pi/2).
    void validate() const;
};

/// d = (sin u, 0, cos u), q = u_t (cos u, 0, -sin u), v = 0, where u solves
/// sigma0 u_tt = lap u with u(0) = u0, u_t(0) = u1, evolved exactly mode by mode.
State geodesic_state_from(const ScalarField& u0, const ScalarField& u1, double t, double sigma0 = 1.0);

/// Single-mode geodesic solution: u0 = amplitude sin(k.x), u1 = 0.
State geodesic_oracle(const GridPtr& grid, const OracleSpec& spec, double t);

/// v = A exp(-2 mu k^2 t) (cos kx1 sin kx2, -sin kx1 cos kx2[, 0]), d = e3, q = 0,
/// with k = mode[0] * 2 pi / L. Needs dim >= 2.
State taylor_green_oracle(const GridPtr& grid, const OracleSpec& spec, double t);

/// e^{tau mu lap} applied per mode.
VectorField heat_semigroup(const VectorField& v, double mu, double tau);

/// Velocity and Duhamel forcing P[-v.grad v - div(grad d (x) grad d)] at sampling times.
struct NonlinearRecord {
    double mu = 1.0;
    std::vector<double> times;
    std::vector<VectorField> velocity;
    std::vector<VectorField> forcing;

    /// Appends one snapshot; times must increase.
    void add(const State& s);
};

/// v(t) = e^{(t-t0) mu lap} v(t0) + int_{t0}^t e^{(t-s) mu lap} forcing(s) ds, trapezoid
/// over the stored samples. Throws InsufficientDataError unless t0 and t are
/// sample times with t0 < t.
VectorField duhamel_reconstruct(const NonlinearRecord& record, double t0, double t);

struct ResidualReport {
    /// ||LHS - RHS|| over velocity and director equations together.
    double absolute = 0.0;
    /// absolute / max(||LHS||, ||RHS||, ||(d_t v, d_t q)||).
    double relative = 0.0;
};

/// Residual of the once-commuted equations for Z = a[0] on equally spaced
/// snapshots. The left sides d_t Z v and d_t d_t Z d are centred time differences;
/// the right sides are linearizations of the discrete nonlinearities in the
/// direction (Z v, Z d), with (S - 1) in the viscous and stress terms when Z = S.
/// The worst interior snapshot is reported. Throws ConfigError unless |a| = 1 and
/// MissingHistoryError with fewer than three snapshots.
ResidualReport commuted_residual(const std::vector<State>& snapshots, const Params& p,
                                 const std::vector<VectorFieldOp>& a);

/// Empirical constants of the weighted Sobolev inequalities on R^3:
///  0: <r>^{1/2} |u|            <= C sum_{|a|<=1} ||grad Omega^a u||
///  1: <r> |u|                  <= C (sum_{|a|<=1} ||d_r Omega^a u||)^{1/2} (sum_{|a|<=2} ||Omega^a u||)^{1/2}
///  2: <t> ||u||_{Linf(r<=<t>/2)} <= C (||u|| + ||<t-r> grad u|| + ||<t-r> grad^2 u||)
///  3: <t> ||u||_{L6(r<=<t>/2)}   <= C (||u|| + ||<t-r> grad u||)
///  4: <t>^{1/2} ||u||_{L3(r<=<t>/2)} <= C ||u||^{1/2} (||<r-t> grad u|| + ||u||)^{1/2}
struct ProbeReport {
    static constexpr int count = 5;
    std::array<double, count> max_ratio{};
    /// Pairs (field, time) with LHS = RHS = 0, left out of the maximum.
    std::array<int, count> skipped{};
};

/// Throws DomainError outside 3D and ProbeFailure when some RHS vanishes with LHS != 0.
ProbeReport sobolev_probe(const std::vector<ScalarField>& family, const std::vector<double>& times = {0.0});

/// One forward-Euler step with second-order centred differences and a discrete
/// pressure Poisson solve (conjugate gradients). Shares no code with the spectral path.
State fd_reference_step(const State& s, const Params& p, double dt);

}  // namespace iel
