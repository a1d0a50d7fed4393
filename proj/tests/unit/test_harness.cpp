#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "iel/errors.hpp"
#include "iel/harness.hpp"

using namespace iel;
using testutil::max_diff;
namespace fs = std::filesystem;

namespace {

ScenarioConfig small_config(Family family = Family::mixed, int dim = 2) {
    ScenarioConfig c;
    c.dim = dim;
    c.n_points = 32;
    c.box_length = 16.0;
    c.epsilon = 1e-2;
    c.family = family;
    c.support_radius = 4.0;
    c.horizon = 2.0;
    c.sample_dt = 0.5;
    c.kappa_max = 1;
    c.seed = 7;
    return c;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("iel_harness_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double tb(double t) { return std::sqrt(1.0 + t * t); }

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("initial data construction") {
    SUBCASE("eps = 0 is the exact equilibrium") {
        for (Family f : {Family::bump_director, Family::bump_velocity, Family::mixed}) {
            ScenarioConfig c = small_config(f, 3);
            c.n_points = 16;
            c.epsilon = 0.0;
            const State s = make_initial_data(c);
            const State e = State::equilibrium(s.grid_ptr());
            CHECK(max_diff(s.d, e.d) == 0.0);
            CHECK(testutil::max_abs(s.q) == 0.0);
            CHECK(testutil::max_abs(s.v) == 0.0);
        }
    }
    SUBCASE("unit director, tangent velocity, solenoidal flow") {
        ScenarioConfig c = small_config(Family::mixed, 3);
        c.n_points = 16;
        c.epsilon = 0.3;
        const State s = make_initial_data(c);
        double worst_norm = 0.0, worst_dot = 0.0;
        for (std::size_t i = 0; i < s.d[0].size(); ++i) {
            double n = 0.0, dq = 0.0;
            for (int k = 0; k < 3; ++k) {
                n += s.d[k][i] * s.d[k][i];
                dq += s.d[k][i] * s.q[k][i];
            }
            worst_norm = std::max(worst_norm, std::abs(n - 1.0));
            worst_dot = std::max(worst_dot, std::abs(dq));
        }
        CHECK(worst_norm <= 1e-14);
        CHECK(worst_dot <= 1e-14);
        CHECK(testutil::max_abs(s.v) > 0.0);
        CHECK(max_spectral_divergence(s.v) <= 1e-13);
    }
    SUBCASE("velocity is linear in eps") {
        ScenarioConfig c = small_config(Family::bump_velocity, 3);
        c.n_points = 16;
        const double a = std::sqrt(norm_sq(make_initial_data(c).v));
        c.epsilon *= 2.0;
        const double b = std::sqrt(norm_sq(make_initial_data(c).v));
        CHECK(b / a == doctest::Approx(2.0).epsilon(1e-13));
    }
    SUBCASE("seeded and reproducible") {
        ScenarioConfig c = small_config();
        const State a = make_initial_data(c), b = make_initial_data(c);
        CHECK(max_diff(a.d, b.d) == 0.0);
        CHECK(max_diff(a.q, b.q) == 0.0);
        c.seed = 8;
        CHECK(max_diff(make_initial_data(c).q, a.q) > 0.0);
    }
    SUBCASE("support must clear the box margin") {
        ScenarioConfig c = small_config();
        c.horizon = 5.0;
        CHECK_THROWS_AS(make_initial_data(c), ConfigError);
        c.horizon = 2.0;
        c.epsilon = -1.0;
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }
}

TEST_CASE("config documents") {
    ScenarioConfig c = small_config();
    c.fit_window = std::array<double, 2>{0.5, 2.0};
    CHECK(ScenarioConfig::parse(c.to_json()) == c);
    SUBCASE("unknown key") {
        std::string text = c.to_json();
        text.insert(text.find('{') + 1, "\"colour\": 1,");
        CHECK_THROWS_AS(ScenarioConfig::parse(text), ConfigError);
    }
    SUBCASE("missing key") {
        std::string text = c.to_json();
        const auto at = text.find("\"seed\"");
        text.erase(at, text.find('\n', at) - at);
        CHECK_THROWS_AS(ScenarioConfig::parse(text), ConfigError);
    }
    SUBCASE("missing file names the path") {
        try {
            ScenarioConfig::load("/nonexistent/missing.json");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("missing.json") != std::string::npos);
        }
    }
}

TEST_CASE("csv schema") {
    const auto h = csv_header(2);
    const std::vector<std::string> expect{
        "t",      "E_v_0",       "E_v_1",        "E_v_2",    "E_d_1",      "E_d_2",      "E_d_3",
        "X_d_2",  "X_d_3",       "linf_v",       "linf_grad_v", "linf_grad2_v", "linf_dtv", "linf_dZd_0",
        "linf_dZd_1", "linf_dZd_2", "good_unknown", "nullform_ratio", "mod_energy", "div_v_max",
        "constraint_drift", "boundary_mass"};
    CHECK(h == expect);
}

TEST_CASE("run scenario") {
    SUBCASE("eps = 0 gives zero diagnostics") {
        ScenarioConfig c = small_config();
        c.epsilon = 0.0;
        const RunRecord r = run_scenario(c);
        CHECK(r.status == RunStatus::completed);
        REQUIRE(r.frames.size() == 5);
        for (const auto& f : r.frames) {
            const auto row = csv_row(f);
            for (std::size_t k = 1; k < row.size(); ++k) CHECK(row[k] == 0.0);
        }
    }
    SUBCASE("geodesic scenario tracks the oracle energies") {
        ScenarioConfig c;
        c.dim = 1;
        c.n_points = 64;
        c.box_length = 2.0 * M_PI;
        c.epsilon = 0.5;
        c.family = Family::geodesic;
        c.horizon = 10.0;
        c.sample_dt = 1.0;
        c.dt = 1e-3;
        c.kappa_max = 1;
        c.checkpoint_stride = 0;
        const RunRecord r = run_scenario(c);
        REQUIRE(r.status == RunStatus::completed);
        REQUIRE(r.frames.size() == 11);
        OracleSpec spec;
        spec.amplitude = 0.5;
        double worst = 0.0;
        for (const auto& f : r.frames) {
            const State o = geodesic_oracle(Grid::create(1, 64, 2.0 * M_PI), spec, f.t);
            const FieldHistory h = FieldHistory::from_state(o, c.params, 1);
            for (int k = 0; k <= 1; ++k) {
                const EnergyPair e = generalized_energy(o, h, k);
                worst = std::max(worst, std::abs(f.E_d[static_cast<std::size_t>(k)] - e.E_d) / e.E_d);
            }
        }
        MESSAGE("worst relative energy gap " << worst);
        CHECK(worst <= 1e-6);
    }
    SUBCASE("halving eps quarters the energies") {
        ScenarioConfig c = small_config();
        c.epsilon = 1e-3;
        const RunRecord a = run_scenario(c);
        c.epsilon = 5e-4;
        const RunRecord b = run_scenario(c);
        REQUIRE(a.frames.size() == b.frames.size());
        for (std::size_t i = 0; i < a.frames.size(); ++i)
            for (std::size_t k = 0; k < a.frames[i].E_v.size(); ++k) {
                CHECK(a.frames[i].E_v[k] / b.frames[i].E_v[k] == doctest::Approx(4.0).epsilon(1e-2));
                CHECK(a.frames[i].E_d[k] / b.frames[i].E_d[k] == doctest::Approx(4.0).epsilon(1e-2));
            }
    }
    SUBCASE("deterministic") {
        const ScenarioConfig c = small_config();
        const RunRecord a = run_scenario(c), b = run_scenario(c);
        CHECK(a.frames == b.frames);
        CHECK(a.dt == b.dt);
    }
    SUBCASE("checkpoints feed the Duhamel reconstruction") {
        ScenarioConfig c = small_config(Family::bump_velocity);
        c.n_points = 64;
        c.box_length = 32.0;
        c.dt = 5e-3;
        c.sample_dt = 0.05;
        c.horizon = 1.0;
        c.epsilon = 0.5;
        const RunRecord r = run_scenario(c);
        INFO(to_string(r.status), " ", r.message);
        REQUIRE(r.checkpoints.size() == 21);
        CHECK(r.checkpoints.front().forcing.size() == 2);
        const VectorField rec = duhamel_reconstruct(r.nonlinear_record(), 0.0, 1.0);
        const VectorField& v = r.checkpoints.back().state.v;
        const double rel = std::sqrt(norm_sq(rec - v) / norm_sq(v));
        MESSAGE("Duhamel relative error " << rel);
        CHECK(rel <= 1e-3);
    }
    SUBCASE("boundary contact ends the run") {
        ScenarioConfig c = small_config(Family::bump_velocity);
        c.params.mu = 50.0;
        const RunRecord r = run_scenario(c);
        CHECK(r.status == RunStatus::boundary_contact);
        CHECK(r.frames.back().boundary_mass > 1e-8);
        CHECK(r.end_time < c.horizon);
        CHECK(r.end_time == r.frames.back().t);
    }
    SUBCASE("blow-up is recorded and the run preserved") {
        ScenarioConfig c = small_config(Family::bump_velocity);
        c.epsilon = 200.0;
        c.dt = 0.25;
        c.params.mu = 1e-3;
        const RunRecord r = run_scenario(c);
        CHECK(r.status == RunStatus::blowup);
        CHECK(!r.frames.empty());
        CHECK(r.end_time < c.horizon);
        CHECK(!r.message.empty());
    }
}

TEST_CASE("persistence round trip") {
    ScenarioConfig c = small_config();
    c.kappa_max = 2;
    const RunRecord r = run_scenario(c);
    const fs::path dir = scratch("roundtrip");
    write_run(dir, r);
    const RunRecord back = read_run(dir);
    CHECK(back.config == r.config);
    CHECK(back.frames == r.frames);
    CHECK(back.status == r.status);
    CHECK(back.end_time == r.end_time);
    CHECK(back.dt == r.dt);
    CHECK(back.message == r.message);
    CHECK(back.initial_norm == r.initial_norm);
    REQUIRE(back.checkpoints.size() == r.checkpoints.size());
    for (std::size_t i = 0; i < r.checkpoints.size(); ++i) {
        const auto& a = r.checkpoints[i];
        const auto& b = back.checkpoints[i];
        CHECK(a.state.t == b.state.t);
        CHECK(max_diff(a.state.v, b.state.v) == 0.0);
        CHECK(max_diff(a.state.d, b.state.d) == 0.0);
        CHECK(max_diff(a.state.q, b.state.q) == 0.0);
        CHECK(max_diff(a.forcing, b.forcing) == 0.0);
    }
    SUBCASE("checkpoint layout") {
        const fs::path f = dir / "checkpoints" / "ckpt_0000.bin";
        std::ifstream in(f, std::ios::binary);
        std::string header;
        std::getline(in, header);
        CHECK(header.find("\"fields\"") != std::string::npos);
        const auto payload = fs::file_size(f) - header.size() - 1;
        CHECK(payload == (2 + 3 + 3 + 2) * 32u * 32u * 8u);
        Params p;
        const Checkpoint ck = read_checkpoint(f, &p);
        CHECK(p == c.params);
        CHECK(ck.state.t == 0.0);
    }
    CHECK_THROWS_AS(read_run(dir / "absent"), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("decay fits") {
    std::vector<double> t, v;
    for (int i = 0; i <= 40; ++i) t.push_back(i);
    SUBCASE("exact power law") {
        for (double x : t) v.push_back(3.0 * std::pow(tb(x), -0.75));
        const DecayFit f = fit_decay(t, v, {5.0, 40.0});
        CHECK(f.exponent == doctest::Approx(-0.75).epsilon(1e-9));
        CHECK(std::abs(f.exponent + 0.75) <= 1e-6);
        CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-9));
        CHECK(f.samples == 36);
        CHECK(f.residual <= 1e-12);
    }
    SUBCASE("constant series") {
        v.assign(t.size(), 2.5);
        CHECK(std::abs(fit_decay(t, v, {0.0, 40.0}).exponent) <= 1e-12);
    }
    SUBCASE("logarithmic correction") {
        for (double x : t) v.push_back(std::pow(tb(x), -1.5) * std::sqrt(std::log(tb(x))));
        CHECK(fit_decay(t, v, {5.0, 40.0}, true).exponent == doctest::Approx(-1.5).epsilon(1e-9));
        CHECK(fit_decay(t, v, {5.0, 40.0}).exponent > -1.5);
        CHECK_THROWS_AS(fit_decay(t, v, {0.0, 40.0}, true), DomainError);
    }
    SUBCASE("heat semigroup of localized data") {
        auto g = Grid::create(3, 128, 128.0);
        const ScalarField u0 = testutil::sample(g, [](double x, double y, double z) {
            return std::exp(-(x * x + y * y + z * z) / 8.0);
        });
        std::vector<double> peak, exact;
        for (double x : t) {
            peak.push_back(max_abs(heat_semigroup(VectorField{u0}, 1.0, x)[0]));
            exact.push_back(std::pow(4.0 / (4.0 + 2.0 * x), 1.5));
        }
        const double a = fit_decay(t, peak, {5.0, 40.0}).exponent;
        const double b = fit_decay(t, exact, {5.0, 40.0}).exponent;
        MESSAGE("heat exponent " << a);
        CHECK(a == doctest::Approx(b).epsilon(1e-4));
        CHECK(a <= -0.75);
    }
    SUBCASE("errors") {
        v.assign(t.size(), 1.0);
        CHECK_THROWS_AS(fit_decay(t, v, {5.0, 7.0}), InsufficientDataError);
        v[10] = 0.0;
        CHECK_THROWS_AS(fit_decay(t, v, {5.0, 40.0}), DomainError);
    }
}

TEST_CASE("sweeps") {
    ScenarioConfig base = small_config();
    base.horizon = 1.0;
    base.sample_dt = 0.25;
    base.checkpoint_stride = 0;
    SUBCASE("single point equals a plain run") {
        const SweepResult s = run_sweep(base, {});
        REQUIRE(s.entries.size() == 1);
        REQUIRE(s.entries[0].record);
        CHECK(s.entries[0].record->frames == run_scenario(base).frames);
    }
    SUBCASE("two amplitudes scale quadratically") {
        base.epsilon = 1e-3;
        SweepAxes axes;
        axes.epsilon = {1e-3, 5e-4};
        const fs::path dir = scratch("sweep");
        SweepOptions opt;
        opt.out_dir = dir;
        opt.workers = 2;
        const SweepResult s = run_sweep(base, axes, opt);
        const auto rows = s.summary_rows();
        REQUIRE(rows.size() == 2);
        const double a = s.entries[0].record->frames.back().E_d[0];
        const double b = s.entries[1].record->frames.back().E_d[0];
        CHECK(a / b == doctest::Approx(4.0).epsilon(1e-2));
        CHECK(fs::exists(dir / "summary.csv"));
        CHECK(fs::exists(dir / "run_001" / "series.csv"));
        fs::remove_all(dir);
    }
    SUBCASE("Taylor-Green control decays at 2 mu") {
        SweepAxes axes;
        axes.mu = {0.5, 1.0};
        const SweepResult s = run_sweep(base, axes);
        REQUIRE(s.entries.size() == 2);
        CHECK(s.entries[0].control_rate == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(s.entries[1].control_rate == doctest::Approx(2.0).epsilon(1e-8));
    }
    SUBCASE("bad runs are recorded and the sweep continues") {
        SweepAxes axes;
        axes.n_points = {15, 16};
        const SweepResult s = run_sweep(base, axes);
        CHECK(!s.entries[0].error.empty());
        CHECK(!s.entries[0].record);
        CHECK(s.entries[1].record);
        CHECK(s.summary_rows()[0][5] == "error");
    }
    SUBCASE("size cap") {
        SweepAxes axes;
        axes.epsilon = {1e-3, 2e-3, 3e-3};
        SweepOptions opt;
        opt.max_runs = 2;
        CHECK_THROWS_AS(run_sweep(base, axes, opt), ConfigError);
    }
}

TEST_CASE("reports") {
    SUBCASE("empty bundle") {
        const fs::path dir = scratch("report_empty");
        emit_report({}, dir);
        const std::string s = slurp(dir / "summary.csv");
        CHECK(s.rfind("run,epsilon", 0) == 0);
        CHECK(std::count(s.begin(), s.end(), '\n') == 1);
        fs::remove_all(dir);
    }
    SUBCASE("one run, regenerated byte for byte") {
        ScenarioConfig c = small_config();
        c.checkpoint_stride = 0;
        const RunRecord r = run_scenario(c);
        const fs::path a = scratch("report_a"), b = scratch("report_b");
        emit_report({r}, a);
        emit_report({r}, b);
        const auto cols = tracked_columns(c.kappa_max);
        CHECK(fs::exists(a / "run_000" / "series.csv"));
        std::size_t svgs = 0;
        for (const auto& e : fs::recursive_directory_iterator(a)) {
            if (!e.is_regular_file()) continue;
            if (e.path().extension() == ".svg") ++svgs;
            CHECK(slurp(e.path()) == slurp(b / fs::relative(e.path(), a)));
        }
        CHECK(svgs == cols.size());
        fs::remove_all(a);
        fs::remove_all(b);
    }
    SUBCASE("unwritable target names the path") {
        try {
            emit_report({}, "/proc/iel_report");
            FAIL("expected IoError");
        } catch (const IoError& e) {
            CHECK(std::string(e.what()).find("/proc/iel_report") != std::string::npos);
        }
    }
}

}  // TEST_SUITE
