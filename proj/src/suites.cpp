#include "iel/suites.hpp"

#include <cmath>
#include <functional>

#include "iel/errors.hpp"
#include "iel/integrator.hpp"
#include "iel/spectral.hpp"
#include "iel/verification.hpp"

namespace iel {

namespace {

ScalarField sample(const GridPtr& g, const std::function<double(double, double, double)>& fn) {
    ScalarField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto idx = g->unflatten(i);
        double x[3] = {0.0, 0.0, 0.0};
        for (int a = 0; a < g->dim(); ++a) x[a] = g->coordinate(idx[a]);
        f[i] = fn(x[0], x[1], x[2]);
    }
    return f;
}

CheckResult check(const std::string& suite, const std::string& name, double value, double lower, double upper) {
    return {suite, name, value, lower, upper, std::isfinite(value) && value >= lower && value <= upper};
}

double director_distance(const State& a, const State& b) {
    return std::sqrt(norm_sq(a.d - b.d) + norm_sq(a.q - b.q));
}

std::vector<CheckResult> oracle_suite() {
    std::vector<CheckResult> out;
    {
        auto g = Grid::create(1, 64, 2.0 * M_PI);
        OracleSpec spec;
        spec.amplitude = 0.5;
        const State end = trajectory(geodesic_oracle(g, spec, 0.0), Params{}, 1e-3, 1000).back();
        out.push_back(check("oracles", "geodesic L2 error at t = 1", director_distance(end, geodesic_oracle(g, spec, 1.0)),
                            0.0, 1e-5));
    }
    {
        auto g = Grid::create(2, 16, 2.0 * M_PI);
        OracleSpec spec;
        spec.kind = OracleKind::taylor_green;
        spec.mu = 0.5;
        const Params p{1.0, 0.0, spec.mu};
        const State s0 = taylor_green_oracle(g, spec, 0.0);
        const State end = trajectory(s0, p, 1e-3, 1000).back();
        const double ratio = std::sqrt(norm_sq(end.v) / norm_sq(s0.v));
        const double exact = std::exp(-2.0 * spec.mu);
        out.push_back(check("oracles", "Taylor-Green amplitude relative error at t = 1",
                            std::abs(ratio - exact) / exact, 0.0, 1e-8));
        out.push_back(check("oracles", "Taylor-Green divergence at t = 1", max_spectral_divergence(end.v), 0.0, 1e-10));
    }
    return out;
}

std::vector<CheckResult> commutation_suite() {
    std::vector<CheckResult> out;
    {
        auto g = Grid::create(1, 64, 2.0 * M_PI);
        OracleSpec spec;
        spec.amplitude = 0.5;
        const State s0 = geodesic_oracle(g, spec, 0.3);
        const std::vector<VectorFieldOp> d1{{OpKind::translation, 0}};
        const double r1 = commuted_residual(trajectory(s0, Params{}, 1e-3, 2), Params{}, d1).relative;
        const double r2 = commuted_residual(trajectory(s0, Params{}, 5e-4, 2), Params{}, d1).relative;
        out.push_back(check("commutation", "geodesic d_1 residual", r1, 0.0, 1e-6));
        out.push_back(check("commutation", "geodesic d_1 residual ratio under dt halving", r1 / r2, 3.0, 5.0));
    }
    auto g = Grid::create(2, 96, 20.0);
    Params p;
    p.sigma0 = 1.5;
    p.sigma1 = 0.3;
    const State s0 = localized_state(g, 1e-3);
    const auto coarse = trajectory(s0, p, 1e-2, 2);
    const auto fine = trajectory(s0, p, 5e-3, 2);
    for (const auto& op : vectorfield_ops(2)) {
        const double r1 = commuted_residual(coarse, p, {op}).relative;
        const double r2 = commuted_residual(fine, p, {op}).relative;
        out.push_back(check("commutation", "coupled " + op_label(op) + " residual", r1, 0.0, 2e-2));
        out.push_back(check("commutation", "coupled " + op_label(op) + " residual ratio under dt halving", r1 / r2, 2.8,
                            5.2));
    }
    return out;
}

std::vector<CheckResult> sobolev_suite() {
    std::vector<CheckResult> out;
    auto bump = [](const GridPtr& g) {
        return sample(g, [](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z)); });
    };
    const ProbeReport a = sobolev_probe({bump(Grid::create(3, 32, 12.0))}, {0.0, 2.0});
    const ProbeReport b = sobolev_probe({bump(Grid::create(3, 48, 12.0))}, {0.0, 2.0});
    for (int k = 0; k < ProbeReport::count; ++k) {
        const std::string tag = "inequality " + std::to_string(k);
        out.push_back(check("sobolev", tag + " constant", a.max_ratio[k], 1e-12, 1e12));
        out.push_back(check("sobolev", tag + " grid drift",
                            std::abs(a.max_ratio[k] - b.max_ratio[k]) / b.max_ratio[k], 0.0, 0.05));
    }
    return out;
}

std::vector<CheckResult> duhamel_suite() {
    std::vector<CheckResult> out;
    {
        auto g = Grid::create(2, 32, 2.0 * M_PI);
        OracleSpec spec;
        spec.kind = OracleKind::taylor_green;
        spec.mu = 0.5;
        const Params p{1.0, 0.0, spec.mu};
        const auto traj = trajectory(taylor_green_oracle(g, spec, 0.0), p, 1e-3, 500);
        NonlinearRecord rec;
        rec.mu = p.mu;
        for (std::size_t i = 0; i < traj.size(); i += 50) rec.add(traj[i]);
        const double err = std::sqrt(norm_sq(duhamel_reconstruct(rec, 0.0, 0.5) - traj.back().v) /
                                     norm_sq(traj.back().v));
        out.push_back(check("duhamel", "Taylor-Green reconstruction relative error", err, 0.0, 1e-8));
    }
    {
        auto g = Grid::create(2, 64, 20.0);
        const Params p;
        const auto traj = trajectory(localized_state(g, 0.5), p, 1e-3, 400);
        auto error = [&](std::size_t every) {
            NonlinearRecord rec;
            rec.mu = p.mu;
            for (std::size_t i = 0; i < traj.size(); i += every) rec.add(traj[i]);
            return std::sqrt(norm_sq(duhamel_reconstruct(rec, 0.0, 0.4) - traj.back().v));
        };
        const double e1 = error(40), e2 = error(20);
        out.push_back(check("duhamel", "coupled reconstruction error ratio under sampling halving", e1 / e2, 3.0, 5.0));
    }
    return out;
}

}  // namespace

std::vector<std::string> suite_names() { return {"oracles", "commutation", "sobolev", "duhamel"}; }

std::vector<CheckResult> run_suite(const std::string& name) {
    if (name == "all") {
        std::vector<CheckResult> out;
        for (const auto& n : suite_names()) {
            auto part = run_suite(n);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    if (name == "oracles") return oracle_suite();
    if (name == "commutation") return commutation_suite();
    if (name == "sobolev") return sobolev_suite();
    if (name == "duhamel") return duhamel_suite();
    throw ConfigError("unknown verification suite '" + name + "'");
}

std::string op_label(const VectorFieldOp& op) {
    switch (op.kind) {
        case OpKind::time_derivative: return "d_t";
        case OpKind::translation: return "d_" + std::to_string(op.axis + 1);
        case OpKind::rotation: return "Omega_" + std::to_string(op.axis + 1);
        case OpKind::scaling: return "S";
    }
    return "?";
}

std::vector<State> trajectory(State s, const Params& p, double dt, int steps) {
    const Stepper st(s.grid_ptr(), p, dt);
    std::vector<State> out{s};
    out.reserve(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i < steps; ++i) out.push_back(s = st.step(s));
    return out;
}

State localized_state(const GridPtr& g, double eps) {
    State s = State::equilibrium(g);
    const ScalarField psi = sample(g, [&](double x, double y, double) {
        return eps * std::exp(-((x - 0.5) * (x - 0.5) + 2.0 * y * y) / 2.0);
    });
    s.v = perp_gradient(psi);
    const ScalarField a = sample(g, [&](double x, double y, double) {
        return 3.0 * eps * std::exp(-(x * x + (y - 0.4) * (y - 0.4)) / 2.0);
    });
    const ScalarField b = sample(g, [&](double x, double y, double) {
        return 2.0 * eps * x * std::exp(-(x * x + y * y) / 2.0);
    });
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double n = std::sqrt(a[i] * a[i] + b[i] * b[i] + 1.0);
        s.d[0][i] = a[i] / n;
        s.d[1][i] = b[i] / n;
        s.d[2][i] = 1.0 / n;
    }
    return s;
}

}  // namespace iel
