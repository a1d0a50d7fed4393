#include <cmath>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "iel/diagnostics.hpp"
#include "iel/errors.hpp"
#include "iel/integrator.hpp"

using namespace iel;
using testutil::max_diff;
using testutil::random_admissible;
using testutil::sample;

namespace {

/// 1 for r <= r0, 0 for r >= r1, smooth in between.
double plateau(double r, double r0, double r1) {
    auto f = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
    const double s = (r - r0) / (r1 - r0);
    return 1.0 - f(s) / (f(s) + f(1.0 - s));
}

VectorJet scalar_jet(std::vector<ScalarField> coeffs) { return VectorJet{ScalarJet(std::move(coeffs))}; }

/// d = (sin u, 0, cos u), u = a sin x1, at rest.
State bent_state(const GridPtr& g, double a) {
    State s = State::equilibrium(g);
    s.d[0] = sample(g, [&](double x, double, double) { return std::sin(a * std::sin(x)); });
    s.d[2] = sample(g, [&](double x, double, double) { return std::cos(a * std::sin(x)); });
    return s;
}

DiagnosticsFrame synthetic_frame(double t, double ed) {
    DiagnosticsFrame f;
    f.t = t;
    f.E_v = {1.0};
    f.E_d = {ed};
    f.linf_dZd = {std::sqrt(ed) / std::sqrt(1.0 + t * t)};
    return f;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("rotation of a radial scalar vanishes") {
    auto g = Grid::create(3, 48, 24.0);
    const ScalarField f = sample(g, [](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z) / 4.0); });
    for (int axis = 0; axis < 3; ++axis) {
        const VectorField out = apply_vectorfield(VectorField{f}, {OpKind::rotation, axis}, nullptr, Target::scalar);
        CHECK(max_abs(out[0]) <= 1e-10);
    }
}

TEST_CASE("corrected rotation annihilates the equivariant velocity") {
    auto g = Grid::create(3, 48, 24.0);
    auto chi = [](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z) / 4.0); };
    VectorField v;
    v.push_back(sample(g, [&](double x, double y, double z) { return y * chi(x, y, z); }));
    v.push_back(sample(g, [&](double x, double y, double z) { return -x * chi(x, y, z); }));
    v.push_back(ScalarField(g));
    const VectorField out = apply_vectorfield(v, {OpKind::rotation, 2}, nullptr, Target::velocity);
    CHECK(testutil::max_abs(out) <= 1e-10);
    const VectorField plain = apply_vectorfield(v, {OpKind::rotation, 2}, nullptr, Target::director);
    CHECK(testutil::max_abs(plain) >= 0.1);
}

TEST_CASE("scaling field on a synthetic history: S(t x1) = 2 t x1") {
    auto g = Grid::create(2, 256, 24.0);
    const double t = 0.7;
    auto cut = [](double x, double y) { return plateau(std::hypot(x, y), 2.0, 11.0); };
    const ScalarField u = sample(g, [&](double x, double y, double) { return t * x * cut(x, y); });
    const ScalarField ut = sample(g, [&](double x, double y, double) { return x * cut(x, y); });
    SolutionJets jets;
    jets.t = t;
    jets.scalar = ScalarJet({u, ut});
    const FieldHistory hist = FieldHistory::synthetic(jets);
    const VectorField su = apply_vectorfield(VectorField{u}, {OpKind::scaling, 0}, &hist, Target::scalar);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto idx = g->unflatten(i);
        const double x = g->coordinate(idx[0]), y = g->coordinate(idx[1]);
        if (std::hypot(x, y) < 2.0) worst = std::max(worst, std::abs(su[0][i] - 2.0 * t * x));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("time derivatives need a history") {
    auto g = Grid::create(2, 8, 1.0);
    const VectorField f = zero_vector(g, 2);
    CHECK_THROWS_AS(apply_vectorfield(f, {OpKind::time_derivative, 0}, nullptr, Target::velocity),
                    MissingHistoryError);
    CHECK_THROWS_AS(apply_vectorfield(f, {OpKind::scaling, 0}, nullptr, Target::velocity), MissingHistoryError);
    CHECK_THROWS_AS(apply_vectorfield(f, {OpKind::rotation, 0}, nullptr, Target::velocity), ConfigError);
}

TEST_CASE("commutators with the scaling and rotation fields") {
    auto g = Grid::create(2, 64, 20.0);
    const double t = 1.3;
    auto gauss = [&](double cx, double cy) {
        return sample(g, [=](double x, double y, double) {
            return std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / 2.0);
        });
    };
    const VectorJet f = scalar_jet({gauss(0.5, -0.3), 0.4 * gauss(-0.2, 0.1), -0.7 * gauss(0.3, 0.6)});
    const VectorFieldOp S{OpKind::scaling, 0}, d1{OpKind::translation, 0}, d2{OpKind::translation, 1},
        dt{OpKind::time_derivative, 0}, om{OpKind::rotation, 2};
    const double tol = 1e-9;

    SUBCASE("(S + 1) d = d S") {
        for (const auto& d : {d1, d2, dt}) {
            const VectorJet df = apply_vectorfield(f, d, t, Target::scalar);
            const VectorField lhs = coefficient(apply_vectorfield(df, S, t, Target::scalar), 0) + coefficient(df, 0);
            const VectorField rhs =
                coefficient(apply_vectorfield(apply_vectorfield(f, S, t, Target::scalar), d, t, Target::scalar), 0);
            CHECK(max_diff(lhs, rhs) <= tol);
        }
    }
    SUBCASE("(S + 2) d^2 = d^2 S") {
        const VectorJet ddf = apply_vectorfield(apply_vectorfield(f, d1, t, Target::scalar), dt, t, Target::scalar);
        const VectorField lhs =
            coefficient(apply_vectorfield(ddf, S, t, Target::scalar), 0) + 2.0 * coefficient(ddf, 0);
        const VectorJet sf = apply_vectorfield(f, S, t, Target::scalar);
        const VectorField rhs = coefficient(
            apply_vectorfield(apply_vectorfield(sf, d1, t, Target::scalar), dt, t, Target::scalar), 0);
        CHECK(max_diff(lhs, rhs) <= tol);
    }
    SUBCASE("[d_1, Omega_3] = d_2 and [d_2, Omega_3] = -d_1") {
        auto comm = [&](const VectorFieldOp& d) {
            const VectorField a = coefficient(
                apply_vectorfield(apply_vectorfield(f, om, t, Target::scalar), d, t, Target::scalar), 0);
            const VectorField b = coefficient(
                apply_vectorfield(apply_vectorfield(f, d, t, Target::scalar), om, t, Target::scalar), 0);
            return a - b;
        };
        CHECK(max_diff(comm(d1), coefficient(apply_vectorfield(f, d2, t, Target::scalar), 0)) <= tol);
        CHECK(max_diff(comm(d2), -1.0 * coefficient(apply_vectorfield(f, d1, t, Target::scalar), 0)) <= tol);
    }
    SUBCASE("rotation and scaling commute") {
        const VectorField a = coefficient(
            apply_vectorfield(apply_vectorfield(f, om, t, Target::scalar), S, t, Target::scalar), 0);
        const VectorField b = coefficient(
            apply_vectorfield(apply_vectorfield(f, S, t, Target::scalar), om, t, Target::scalar), 0);
        CHECK(max_diff(a, b) <= tol);
    }
}

TEST_CASE("Z tree visits every multiset once with S outermost") {
    auto g = Grid::create(3, 8, 2.0 * M_PI);
    const SolutionJets jets = solution_jets(State::equilibrium(g), Params{}, 3, 2);
    std::set<std::vector<int>> seen;
    int count = 0;
    walk_z_tree(jets, 2, [&](const ZNode& n) {
        ++count;
        for (std::size_t i = 1; i < n.ops.size(); ++i) CHECK(n.ops[i] <= n.ops[i - 1]);
        seen.insert(n.ops);
        CHECK(min_order(n.d) == 3 - static_cast<int>(n.ops.size()));
    });
    CHECK(count == 1 + 8 + 36);
    CHECK(seen.size() == 45u);
    CHECK_THROWS_AS(walk_z_tree(jets, 3, [](const ZNode&) {}), MissingHistoryError);

    auto g2 = Grid::create(2, 8, 2.0 * M_PI);
    int count2 = 0;
    walk_z_tree(solution_jets(State::equilibrium(g2), Params{}, 3, 2), 2, [&](const ZNode&) { ++count2; });
    CHECK(count2 == 1 + 5 + 15);
}

TEST_CASE("solution jets agree with centred time differences of the right-hand sides") {
    auto g = Grid::create(2, 16, 2.0 * M_PI);
    const Params p;
    const State s0 = random_admissible(g, 500, 0.05);
    const double h = 1e-3;
    const Stepper st(g, p, h);
    const State s1 = st.step(s0);
    const State s2 = st.step(s1);
    const SolutionJets j = solution_jets(s1, p, 3, 2);
    CHECK(max_diff(coefficient(j.d, 1), s1.q) == 0.0);
    CHECK(max_diff(coefficient(j.v, 1), momentum_rhs(s1, p)) <= 1e-15);
    CHECK(max_diff(coefficient(j.d, 2), director_rhs(s1, p)) <= 1e-15);

    const VectorField v2 = (1.0 / (2.0 * h)) * (momentum_rhs(s2, p) - momentum_rhs(s0, p));
    const VectorField d3 = (1.0 / (2.0 * h)) * (director_rhs(s2, p) - director_rhs(s0, p));
    MESSAGE("v'' mismatch " << max_diff(v2, coefficient(j.v, 2)) << " of " << testutil::max_abs(v2));
    MESSAGE("d''' mismatch " << max_diff(d3, coefficient(j.d, 3)) << " of " << testutil::max_abs(d3));
    CHECK(max_diff(v2, coefficient(j.v, 2)) <= 1e-4 * testutil::max_abs(v2));
    CHECK(max_diff(d3, coefficient(j.d, 3)) <= 1e-4 * testutil::max_abs(d3));
}

TEST_CASE("generalized energy") {
    SUBCASE("equilibrium has zero energy") {
        auto g = Grid::create(3, 8, 2.0 * M_PI);
        const State s = State::equilibrium(g);
        const EnergyPair e = generalized_energy(s, FieldHistory::from_state(s, Params{}), 2);
        CHECK(e.E_v == 0.0);
        CHECK(e.E_d == 0.0);
    }
    SUBCASE("kappa = 0 velocity energy matches the closed-form integral") {
        auto g = Grid::create(2, 128, 30.0);
        State s = State::equilibrium(g);
        s.v[0] = sample(g, [](double x, double y, double) { return std::sin(x) * std::exp(-(x * x + y * y) / 4.0); });
        const EnergyPair e = generalized_energy(s, FieldHistory::from_state(s, Params{}), 0);
        const double exact = M_PI * (1.0 - std::exp(-2.0));
        CHECK(std::abs(e.E_v - exact) <= 1e-10 * exact);
        CHECK(e.E_d == 0.0);
    }
    SUBCASE("energy grows with kappa") {
        auto g = Grid::create(2, 16, 2.0 * M_PI);
        const State s = random_admissible(g, 600, 0.05);
        const FieldHistory hist = FieldHistory::from_state(s, Params{});
        const EnergyPair e0 = generalized_energy(s, hist, 0), e1 = generalized_energy(s, hist, 1),
                         e2 = generalized_energy(s, hist, 2);
        CHECK(e1.E_v >= e0.E_v);
        CHECK(e2.E_v >= e1.E_v);
        CHECK(e1.E_d >= e0.E_d);
        CHECK(e2.E_d >= e1.E_d);
        CHECK_THROWS_AS(generalized_energy(s, hist, 3), ConfigError);
    }
}

TEST_CASE("weighted X norm") {
    auto g = Grid::create(2, 32, 2.0 * M_PI);
    SUBCASE("vanishes at equilibrium and rejects kappa < 2") {
        const State s = State::equilibrium(g);
        const FieldHistory hist = FieldHistory::from_state(s, Params{});
        CHECK(weighted_X_norm(s, hist, 2) == 0.0);
        CHECK_THROWS_AS(weighted_X_norm(s, hist, 1), ConfigError);
    }
    SUBCASE("one-dimensional profile matches the weighted quadrature") {
        const double a = 0.5;
        const State s = bent_state(g, a);
        const FieldHistory hist = FieldHistory::from_state(s, Params{});
        // |d^2 d|^2 = |d_tt d|^2 + |d_11 d|^2 = 2 u''^2 + u'^4 at rest.
        double weighted = 0.0, plain = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i) {
            const auto idx = g->unflatten(i);
            const double x = g->coordinate(idx[0]), y = g->coordinate(idx[1]);
            const double u1 = a * std::cos(x), u2 = -a * std::sin(x);
            const double dens = 2.0 * u2 * u2 + u1 * u1 * u1 * u1;
            weighted += (1.0 + x * x + y * y) * dens;
            plain += dens;
        }
        weighted *= g->cell_volume();
        plain *= g->cell_volume();
        CHECK(std::abs(weighted_X_norm(s, hist, 2) - weighted) <= 1e-8 * weighted);
        CHECK(std::abs(weighted_X_norm(s, hist, 2, true) - plain) <= 1e-8 * plain);
    }
    SUBCASE("quadratic in the amplitude") {
        const State s1 = bent_state(g, 1e-3), s2 = bent_state(g, 2e-3);
        const double x1 = weighted_X_norm(s1, FieldHistory::from_state(s1, Params{}), 2);
        const double x2 = weighted_X_norm(s2, FieldHistory::from_state(s2, Params{}), 2);
        CHECK(x2 / x1 == doctest::Approx(4.0).epsilon(1e-5));
    }
}

TEST_CASE("light-cone diagnostics") {
    SUBCASE("equilibrium gives zeros and an empty-region signal") {
        auto g = Grid::create(2, 16, 20.0);
        State s = State::equilibrium(g);
        s.t = 1.0;
        const LightconeResult r = lightcone_diagnostics(s, FieldHistory::from_state(s, Params{}), 1);
        CHECK(r.good_unknown_norm == 0.0);
        CHECK(r.nullform_ratio == 0.0);
        CHECK(r.region_empty);
    }
    SUBCASE("outgoing geodesic wave annihilates the good unknown") {
        auto g = Grid::create(1, 512, 40.0);
        const double t = 5.0, amp = 0.4;
        auto phi = [&](double x) { return amp * std::exp(-(x - t - 5.0) * (x - t - 5.0)); };
        auto dphi = [&](double x) { return -2.0 * (x - t - 5.0) * phi(x); };
        State s = State::equilibrium(g);
        s.t = t;
        s.d[0] = sample(g, [&](double x, double, double) { return std::sin(phi(x)); });
        s.d[2] = sample(g, [&](double x, double, double) { return std::cos(phi(x)); });
        s.q[0] = sample(g, [&](double x, double, double) { return -dphi(x) * std::cos(phi(x)); });
        s.q[2] = sample(g, [&](double x, double, double) { return dphi(x) * std::sin(phi(x)); });
        const FieldHistory hist = FieldHistory::from_state(s, Params{}, 1);
        const LightconeResult r = lightcone_diagnostics(s, hist, 0);
        const DiagnosticsFrame f = compute_frame(s, hist);
        MESSAGE("good unknown " << r.good_unknown_norm << " vs hessian " << f.cone_hessian_norm[0]);
        CHECK_FALSE(r.region_empty);
        CHECK(r.good_unknown_norm <= 1e-8 * f.cone_hessian_norm[0]);
        CHECK(r.nullform_ratio <= 1e-8);
    }
    SUBCASE("null form: factorized product equals the direct identity") {
        auto g = Grid::create(2, 32, 2.0 * M_PI);
        const State s = testutil::geodesic_state(g, 0.3, 0.7);
        const LightconeResult r = lightcone_diagnostics(s, FieldHistory::from_state(s, Params{}), 0);
        CHECK_FALSE(r.region_empty);
        CHECK(std::abs(r.nullform_factorized - r.nullform_direct) <= 1e-10 * std::abs(r.nullform_direct));
        CHECK(r.nullform_ratio > 0.0);
    }
}

TEST_CASE("pointwise decay profile") {
    auto g = Grid::create(3, 16, 2.0 * M_PI);
    SUBCASE("equilibrium") {
        const State s = State::equilibrium(g);
        const DecayProfile d = pointwise_decay_profile(s, FieldHistory::from_state(s, Params{}));
        CHECK(d.linf_v == 0.0);
        CHECK(d.linf_grad_v == 0.0);
        CHECK(d.linf_grad2_v == 0.0);
        CHECK(d.linf_dtv == 0.0);
        for (double x : d.linf_dZd) CHECK(x == 0.0);
    }
    SUBCASE("shear profile matches closed-form maxima and scales linearly") {
        const double A = 0.3;
        State s = State::equilibrium(g);
        s.v[2] = sample(g, [&](double x, double, double) { return A * std::sin(x); });
        const DecayProfile d = pointwise_decay_profile(s, FieldHistory::from_state(s, Params{}));
        CHECK(std::abs(d.linf_v - A) <= 1e-8);
        CHECK(std::abs(d.linf_grad_v - A) <= 1e-8);
        CHECK(std::abs(d.linf_grad2_v - A) <= 1e-8);
        CHECK(std::abs(d.linf_dtv - A) <= 1e-8);
        s.v[2] *= 2.0;
        const DecayProfile d2 = pointwise_decay_profile(s, FieldHistory::from_state(s, Params{}));
        CHECK(d2.linf_grad_v == doctest::Approx(2.0 * d.linf_grad_v).epsilon(1e-12));
    }
}

TEST_CASE("modified energy") {
    auto g = Grid::create(2, 16, 2.0 * M_PI);
    SUBCASE("no flow gives exactly half the energy") {
        const State s = testutil::geodesic_state(g, 0.3, 0.4);
        const FieldHistory hist = FieldHistory::from_state(s, Params{});
        for (int k = 0; k <= 2; ++k) {
            const ModifiedEnergy m = modified_energy(s, hist, k);
            CHECK(std::abs(m.value - m.half_energy) <= 1e-12 * m.half_energy);
            CHECK(m.equivalent);
            const ModifiedEnergy lo = modified_energy_lower(s, hist, k);
            CHECK(std::abs(lo.value - lo.half_energy) <= 1e-12 * lo.half_energy);
        }
    }
    SUBCASE("relative gap is first order in the amplitude") {
        auto gap = [&](double eps, bool lower) {
            const State s = random_admissible(g, 700, eps);
            const FieldHistory hist = FieldHistory::from_state(s, Params{});
            const ModifiedEnergy m = lower ? modified_energy_lower(s, hist, 1) : modified_energy(s, hist, 1);
            return std::abs(m.value - m.half_energy) / (2.0 * m.half_energy);
        };
        for (bool lower : {false, true}) {
            const double r = gap(2e-3, lower) / gap(1e-3, lower);
            MESSAGE("gap ratio " << r << " lower-order form " << lower);
            CHECK(r == doctest::Approx(2.0).epsilon(0.1));
        }
    }
    SUBCASE("tiny grid: term-by-term assembly") {
        auto gt = Grid::create(2, 8, 2.0 * M_PI);
        const State s = random_admissible(gt, 800, 0.1);
        const FieldHistory hist = FieldHistory::from_state(s, Params{}, 1);
        const SolutionJets& j = hist.jets();
        const auto ops = vectorfield_ops(2);
        std::vector<VectorJet> zd{j.d}, zv{j.v};
        for (const auto& op : ops) {
            zd.push_back(apply_vectorfield(j.d, op, s.t, Target::director));
            zv.push_back(apply_vectorfield(j.v, op, s.t, Target::velocity));
        }
        std::vector<VectorField> grad_d;
        for (int c = 0; c < 3; ++c) grad_d.push_back(gradient(s.d[c]));
        double expect = 0.0;
        for (std::size_t a = 0; a < zd.size(); ++a) {
            const VectorField z0 = coefficient(zd[a], 0), z1 = coefficient(zd[a], 1), v0 = coefficient(zv[a], 0);
            double t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0;
            for (int c = 0; c < 3; ++c) {
                const VectorField gz = gradient(z0[c]);
                ScalarField vg(gt), zvg(gt);
                for (int k = 0; k < 2; ++k) {
                    vg += s.v[k] * gz[k];
                    zvg += v0[k] * grad_d[c][k];
                }
                t1 += norm_sq(z1[c]) + norm_sq(gz);
                t2 += norm_sq(vg);
                t3 += inner(zvg, z1[c]);
                t4 += norm_sq(zvg);
            }
            expect += 0.5 * t1 - 0.5 * t2 + t3 + 0.5 * t4;
        }
        const ModifiedEnergy m = modified_energy(s, hist, 1);
        CHECK(std::abs(m.value - expect) <= 1e-12 * std::abs(expect));
    }
}

TEST_CASE("diagnostics frame is finite and monotone in kappa") {
    auto g = Grid::create(3, 16, 2.0 * M_PI);
    const State s = random_admissible(g, 900, 0.05);
    const DiagnosticsFrame f = compute_frame(s, FieldHistory::from_state(s, Params{}), 1e-14);
    REQUIRE(f.E_v.size() == 3u);
    REQUIRE(f.E_d.size() == 3u);
    REQUIRE(f.X_d.size() == 2u);
    REQUIRE(f.good_unknown_norm.size() == 2u);
    for (int k = 1; k < 3; ++k) {
        CHECK(f.E_v[k] >= f.E_v[k - 1]);
        CHECK(f.E_d[k] >= f.E_d[k - 1]);
        CHECK(f.linf_dZd[k] >= f.linf_dZd[k - 1]);
    }
    CHECK(f.X_d[1] >= f.X_d[0]);
    CHECK(f.good_unknown_norm[1] >= f.good_unknown_norm[0]);
    for (double x : f.E_d) CHECK(std::isfinite(x));
    for (double x : f.X_d) CHECK(std::isfinite(x));
    CHECK(std::isfinite(f.nullform_ratio));
    CHECK(f.modified_equivalent);
    CHECK(f.constraint_drift == 1e-14);
    CHECK(f.div_v_max <= 1e-12);
}

TEST_CASE("boundary mass") {
    auto g = Grid::create(2, 16, 8.0);
    State s = State::equilibrium(g);
    CHECK(boundary_mass(s, Params{}) == 0.0);
    s.v[0] = ScalarField(g, 1.0);
    CHECK(boundary_mass(s, Params{}) == doctest::Approx(1.0 - (13.0 / 16.0) * (13.0 / 16.0)));
    auto g2 = Grid::create(2, 64, 40.0);
    State c = State::equilibrium(g2);
    c.v[0] = sample(g2, [](double x, double y, double) { return std::exp(-(x * x + y * y)); });
    CHECK(boundary_mass(c, Params{}) <= 1e-12);
}

TEST_CASE("bootstrap monitor") {
    SUBCASE("constant energy") {
        std::vector<DiagnosticsFrame> series;
        for (int i = 0; i < 6; ++i) series.push_back(synthetic_frame(i, 2.0));
        const MonitorReport r = bootstrap_monitor(series, 0.01);
        CHECK(std::abs(r.growth_exponent) <= 1e-12);
        CHECK(r.sup_Ev_ratio == doctest::Approx(1.0));
        CHECK(std::isfinite(r.sup_decay_ratio));
    }
    SUBCASE("exact power law") {
        std::vector<DiagnosticsFrame> series;
        for (int i = 0; i < 10; ++i) {
            const double t = 2.0 * i;
            series.push_back(synthetic_frame(t, std::pow(1.0 + t * t, 0.15)));
        }
        CHECK(bootstrap_monitor(series, 0.01).growth_exponent == doctest::Approx(0.3).epsilon(0.01 / 0.3));
    }
    SUBCASE("too few frames") {
        std::vector<DiagnosticsFrame> series(3, synthetic_frame(0.0, 1.0));
        CHECK_THROWS_AS(bootstrap_monitor(series, 0.01), InsufficientDataError);
    }
}

TEST_CASE("initial data norm") {
    auto g = Grid::create(2, 16, 2.0 * M_PI);
    CHECK(initial_data_norm(State::equilibrium(g), 2) == 0.0);
    const State s = random_admissible(g, 1000, 0.05);
    const double n0 = initial_data_norm(s, 0), n1 = initial_data_norm(s, 1);
    CHECK(n1 >= n0);
    CHECK(n0 * n0 == doctest::Approx(total_energy(s)).epsilon(1e-10));
}

}  // TEST_SUITE
