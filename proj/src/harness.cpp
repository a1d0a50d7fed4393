#include "iel/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "iel/errors.hpp"
#include "iel/integrator.hpp"
#include "iel/rhs.hpp"
#include "iel/spectral.hpp"
#include "json.hpp"

namespace iel {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::map<std::string, Family>& family_names() {
    static const std::map<std::string, Family> names{{"bump-director", Family::bump_director},
                                                     {"bump-velocity", Family::bump_velocity},
                                                     {"mixed", Family::mixed},
                                                     {"geodesic", Family::geodesic},
                                                     {"taylor-green", Family::taylor_green}};
    return names;
}

bool oracle_family(Family f) { return f == Family::geodesic || f == Family::taylor_green; }

constexpr double contact_threshold = 1e-8;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw IoError("not a number: '" + s + "'");
    return x;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(cell);
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void make_dirs(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += ',';
        s += cells[i];
    }
    return s + '\n';
}

std::string csv_line(const std::vector<double>& values) {
    std::vector<std::string> cells;
    for (double x : values) cells.push_back(format_double(x));
    return csv_line(cells);
}

/// C-infinity bump supported in s < 1, Gaussian-like (width about 1/5) near the centre.
double bump(double s) { return s < 1.0 ? std::exp(-12.0 * s * s / (1.0 - s * s)) : 0.0; }

using Vec3 = std::array<double, 3>;

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 normalized(Vec3 a) {
    const double n = std::sqrt(dot3(a, a));
    for (double& x : a) x /= n;
    return a;
}

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

ScalarField radial_profile(const GridPtr& g, const Vec3& centre, double radius) {
    ScalarField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto idx = g->unflatten(i);
        double r2 = 0.0;
        for (int a = 0; a < g->dim(); ++a) {
            const double x = g->coordinate(idx[a]) - centre[static_cast<std::size_t>(a)];
            r2 += x * x;
        }
        f[i] = bump(std::sqrt(r2) / radius);
    }
    return f;
}

}  // namespace

std::string to_string(Family f) {
    for (const auto& [name, value] : family_names())
        if (value == f) return name;
    throw ConfigError("unknown family");
}

Family family_from_string(const std::string& name) {
    const auto it = family_names().find(name);
    if (it == family_names().end()) throw ConfigError("unknown family '" + name + "'");
    return it->second;
}

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return "completed";
        case RunStatus::blowup: return "blowup";
        case RunStatus::boundary_contact: return "boundary-contact";
    }
    throw ConfigError("unknown run status");
}

RunStatus status_from_string(const std::string& name) {
    for (RunStatus s : {RunStatus::completed, RunStatus::blowup, RunStatus::boundary_contact})
        if (to_string(s) == name) return s;
    throw ConfigError("unknown run status '" + name + "'");
}

void ScenarioConfig::validate() const {
    if (dim < 1 || dim > 3) throw ConfigError("dim must be 1, 2 or 3");
    if (n_points < 4 || n_points % 2 != 0) throw ConfigError("n_points must be even and at least 4");
    if (!(box_length > 0.0)) throw ConfigError("box_length must be positive");
    params.validate();
    if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
    if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
    if (!(sample_dt > 0.0) || sample_dt > horizon) throw ConfigError("sample_dt must lie in (0, horizon]");
    if (kappa_max < 0 || kappa_max > 4) throw ConfigError("kappa_max must lie in 0..4");
    if (!(dt >= 0.0)) throw ConfigError("dt must be nonnegative");
    if (checkpoint_stride < 0) throw ConfigError("checkpoint_stride must be nonnegative");
    if (fit_window && !((*fit_window)[0] < (*fit_window)[1])) throw ConfigError("fit_window must be increasing");
    if (oracle_family(family)) {
        if (params.e != Vec3{0.0, 0.0, 1.0}) throw ConfigError("oracle families need e = e3");
        if (family == Family::geodesic && epsilon >= M_PI / 2.0)
            throw ConfigError("geodesic amplitude must stay below pi/2");
        if (family == Family::taylor_green && dim < 2) throw ConfigError("taylor-green needs dim >= 2");
        return;
    }
    if (!(support_radius > 0.0)) throw ConfigError("support_radius must be positive");
    if (!(support_radius + horizon < box_length / 2.0))
        throw ConfigError("support_radius + horizon must stay below box_length / 2");
}

std::array<double, 2> ScenarioConfig::window() const {
    return fit_window ? *fit_window : std::array<double, 2>{horizon / 8.0, horizon};
}

std::string ScenarioConfig::to_json() const {
    json j{{"dim", dim},
           {"n_points", n_points},
           {"box_length", box_length},
           {"mu", params.mu},
           {"sigma0", params.sigma0},
           {"sigma1", params.sigma1},
           {"epsilon", epsilon},
           {"family", to_string(family)},
           {"support_radius", support_radius},
           {"horizon", horizon},
           {"sample_dt", sample_dt},
           {"kappa_max", kappa_max},
           {"seed", seed},
           {"dt", dt},
           {"checkpoint_stride", checkpoint_stride}};
    if (fit_window) j["fit_window"] = *fit_window;
    return j.dump(2) + "\n";
}

ScenarioConfig ScenarioConfig::parse(const std::string& json_text) {
    static const std::set<std::string> required{"dim",     "n_points",       "box_length", "mu",        "sigma0",
                                                "sigma1",  "epsilon",        "family",     "support_radius",
                                                "horizon", "sample_dt",      "kappa_max",  "seed"};
    static const std::set<std::string> optional{"dt", "checkpoint_stride", "fit_window"};
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!required.count(key) && !optional.count(key)) throw ConfigError("unknown config key '" + key + "'");
    for (const auto& key : required)
        if (!j.contains(key)) throw ConfigError("missing config key '" + key + "'");
    ScenarioConfig c;
    try {
        c.dim = j.at("dim").get<int>();
        c.n_points = j.at("n_points").get<int>();
        c.box_length = j.at("box_length").get<double>();
        c.params.mu = j.at("mu").get<double>();
        c.params.sigma0 = j.at("sigma0").get<double>();
        c.params.sigma1 = j.at("sigma1").get<double>();
        c.epsilon = j.at("epsilon").get<double>();
        c.family = family_from_string(j.at("family").get<std::string>());
        c.support_radius = j.at("support_radius").get<double>();
        c.horizon = j.at("horizon").get<double>();
        c.sample_dt = j.at("sample_dt").get<double>();
        c.kappa_max = j.at("kappa_max").get<int>();
        c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("dt")) c.dt = j.at("dt").get<double>();
        if (j.contains("checkpoint_stride")) c.checkpoint_stride = j.at("checkpoint_stride").get<int>();
        if (j.contains("fit_window")) c.fit_window = j.at("fit_window").get<std::array<double, 2>>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    c.validate();
    return c;
}

ScenarioConfig ScenarioConfig::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

State make_initial_data(const ScenarioConfig& cfg) {
    cfg.validate();
    const GridPtr g = Grid::create(cfg.dim, cfg.n_points, cfg.box_length);
    OracleSpec spec;
    spec.amplitude = cfg.epsilon;
    spec.mu = cfg.params.mu;
    spec.sigma0 = cfg.params.sigma0;
    if (cfg.family == Family::geodesic) return geodesic_oracle(g, spec, 0.0);
    if (cfg.family == Family::taylor_green) {
        spec.kind = OracleKind::taylor_green;
        return taylor_green_oracle(g, spec, 0.0);
    }

    const Vec3& e = cfg.params.e;
    const Vec3 a = std::abs(e[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    const double ae = dot3(a, e);
    const Vec3 b1 = normalized({a[0] - ae * e[0], a[1] - ae * e[1], a[2] - ae * e[2]});
    const Vec3 b2 = cross(e, b1);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto tangent = [&](double th) {
        return Vec3{std::cos(th) * b1[0] + std::sin(th) * b2[0], std::cos(th) * b1[1] + std::sin(th) * b2[1],
                    std::cos(th) * b1[2] + std::sin(th) * b2[2]};
    };
    const Vec3 w = tangent(angle(rng));
    const Vec3 w1 = tangent(angle(rng));
    Vec3 A{unit(rng), unit(rng), unit(rng)};
    A = normalized({A[0], A[1], A[2] + 1.5});
    const double R = cfg.support_radius;

    const double eps = cfg.epsilon;
    State s = State::equilibrium(g, e);
    if (cfg.family != Family::bump_velocity) {
        const ScalarField phi = radial_profile(g, {0.0, 0.0, 0.0}, R);
        const ScalarField& psi = phi;
        for (std::size_t i = 0; i < phi.size(); ++i) {
            const double th = eps * phi[i];
            double d[3], dw = 0.0;
            for (int c = 0; c < 3; ++c) {
                d[c] = std::cos(th) * e[static_cast<std::size_t>(c)] + std::sin(th) * w[static_cast<std::size_t>(c)];
                dw += d[c] * w1[static_cast<std::size_t>(c)];
            }
            for (int c = 0; c < 3; ++c) {
                s.d[c][i] = d[c];
                s.q[c][i] = eps * psi[i] * (w1[static_cast<std::size_t>(c)] - dw * d[c]);
            }
        }
    }
    if (cfg.family != Family::bump_director && cfg.dim >= 2) {
        const ScalarField chi = radial_profile(g, {0.0, 0.0, 0.0}, R);
        if (cfg.dim == 2) {
            s.v = eps * perp_gradient(chi);
        } else {
            VectorField chiA;
            for (double c : A) chiA.push_back(c * chi);
            s.v = eps * curl(chiA);
        }
    }
    return s;
}

NonlinearRecord RunRecord::nonlinear_record() const {
    NonlinearRecord rec;
    rec.mu = config.params.mu;
    for (const auto& c : checkpoints) {
        rec.times.push_back(c.state.t);
        rec.velocity.push_back(c.state.v);
        rec.forcing.push_back(c.forcing);
    }
    return rec;
}

namespace {

Checkpoint make_checkpoint(const State& s) {
    Checkpoint c{s, {}};
    if (s.grid().dim() >= 2) c.forcing = rhs::momentum(s.v, rhs::gradients(s.d), 0.0);
    return c;
}

fs::path checkpoint_name(const fs::path& dir, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "ckpt_%04zu.bin", index);
    return dir / buf;
}

}  // namespace

RunRecord run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
    cfg.validate();
    RunRecord rec;
    rec.config = cfg;
    State s = make_initial_data(cfg);
    const GridPtr g = s.grid_ptr();
    const Params& p = cfg.params;
    const int K = cfg.kappa_max;

    const double dt0 = cfg.dt > 0.0 ? cfg.dt : stability_dt(*g, p, s);
    const auto per_sample = static_cast<long>(std::max(1.0, std::ceil(cfg.sample_dt / dt0 - 1e-9)));
    const double dt = cfg.sample_dt / static_cast<double>(per_sample);
    const auto samples = static_cast<long>(std::floor(cfg.horizon / cfg.sample_dt + 1e-9));
    rec.dt = dt;
    rec.initial_norm = initial_data_norm(s, K);
    if (options.checkpoint_dir) make_dirs(*options.checkpoint_dir);

    const Stepper stepper(g, p, dt);
    const StepperConfig guard;
    const double baseline = total_energy(s);
    const bool check_contact = !oracle_family(cfg.family);
    std::size_t stored = 0;

    auto record_frame = [&](long m, double drift) {
        const FieldHistory hist = FieldHistory::from_state(s, p, K);
        rec.frames.push_back(compute_frame(s, hist, drift));
        rec.end_time = s.t;
        if (cfg.checkpoint_stride > 0 && m % cfg.checkpoint_stride == 0) {
            Checkpoint c = make_checkpoint(s);
            if (options.checkpoint_dir)
                write_checkpoint(checkpoint_name(*options.checkpoint_dir, stored), c, p);
            else
                rec.checkpoints.push_back(std::move(c));
            ++stored;
        }
        if (options.on_frame) options.on_frame(rec.frames.back());
    };

    record_frame(0, 0.0);
    if (check_contact && rec.frames.back().boundary_mass > contact_threshold) {
        rec.status = RunStatus::boundary_contact;
        rec.message = "initial data touches the boundary layer";
        return rec;
    }
    for (long m = 1; m <= samples; ++m) {
        double worst_drift = 0.0;
        try {
            for (long k = 0; k < per_sample; ++k) {
                double drift = 0.0;
                State next = stepper.step(s, &drift);
                if (detect_blowup(next, baseline, guard))
                    throw BlowupError("non-finite values or energy growth beyond the guard", s.t);
                s = std::move(next);
                worst_drift = std::max(worst_drift, drift);
            }
        } catch (const BlowupError& e) {
            rec.status = RunStatus::blowup;
            rec.message = e.what();
            return rec;
        } catch (const ConstraintError& e) {
            rec.status = RunStatus::blowup;
            rec.message = e.what();
            return rec;
        }
        s.t = static_cast<double>(m) * cfg.sample_dt;
        record_frame(m, worst_drift);
        if (check_contact && rec.frames.back().boundary_mass > contact_threshold) {
            rec.status = RunStatus::boundary_contact;
            rec.message = "boundary mass exceeded 1e-8";
            return rec;
        }
    }
    rec.status = RunStatus::completed;
    return rec;
}

std::vector<std::string> csv_header(int K) {
    std::vector<std::string> h{"t"};
    for (int k = 0; k <= K; ++k) h.push_back("E_v_" + std::to_string(k));
    for (int k = 1; k <= K + 1; ++k) h.push_back("E_d_" + std::to_string(k));
    for (int k = 2; k <= K + 1; ++k) h.push_back("X_d_" + std::to_string(k));
    for (const char* n : {"linf_v", "linf_grad_v", "linf_grad2_v", "linf_dtv"}) h.emplace_back(n);
    for (int k = 0; k <= K; ++k) h.push_back("linf_dZd_" + std::to_string(k));
    for (const char* n : {"good_unknown", "nullform_ratio", "mod_energy", "div_v_max", "constraint_drift",
                          "boundary_mass"})
        h.emplace_back(n);
    return h;
}

std::vector<double> csv_row(const DiagnosticsFrame& f) {
    std::vector<double> r{f.t};
    r.insert(r.end(), f.E_v.begin(), f.E_v.end());
    r.insert(r.end(), f.E_d.begin(), f.E_d.end());
    r.insert(r.end(), f.X_d.begin(), f.X_d.end());
    r.insert(r.end(), {f.linf_v, f.linf_grad_v, f.linf_grad2_v, f.linf_dtv});
    r.insert(r.end(), f.linf_dZd.begin(), f.linf_dZd.end());
    r.push_back(f.good_unknown_norm.empty() ? 0.0 : f.good_unknown_norm.back());
    r.push_back(f.nullform_ratio);
    r.push_back(f.modified_energy.empty() ? 0.0 : f.modified_energy.back());
    r.insert(r.end(), {f.div_v_max, f.constraint_drift, f.boundary_mass});
    return r;
}

std::vector<double> column(const std::vector<DiagnosticsFrame>& frames, const std::string& name) {
    if (frames.empty()) return {};
    const int K = static_cast<int>(frames.front().E_v.size()) - 1;
    const auto header = csv_header(K);
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("unknown column '" + name + "'");
    const auto idx = static_cast<std::size_t>(it - header.begin());
    std::vector<double> out;
    for (const auto& f : frames) out.push_back(csv_row(f)[idx]);
    return out;
}

namespace {

void put_doubles(std::ostream& out, const ScalarField& f) {
    std::vector<unsigned char> bytes(f.size() * 8);
    std::memcpy(bytes.data(), f.data(), bytes.size());
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < f.size(); ++i) std::reverse(bytes.begin() + 8 * i, bytes.begin() + 8 * i + 8);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void get_doubles(std::istream& in, ScalarField& f) {
    std::vector<unsigned char> bytes(f.size() * 8);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!in) throw IoError("truncated checkpoint payload");
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < f.size(); ++i) std::reverse(bytes.begin() + 8 * i, bytes.begin() + 8 * i + 8);
    std::memcpy(f.data(), bytes.data(), bytes.size());
}

json params_json(const Params& p) {
    return {{"sigma0", p.sigma0}, {"sigma1", p.sigma1}, {"mu", p.mu}, {"e", p.e}};
}

}  // namespace

void write_checkpoint(const fs::path& path, const Checkpoint& c, const Params& p) {
    const Grid& g = c.state.grid();
    std::vector<std::string> names;
    std::vector<const ScalarField*> fields;
    auto add = [&](const std::string& base, const VectorField& v) {
        for (int i = 0; i < v.size(); ++i) {
            names.push_back(base + "_" + std::to_string(i));
            fields.push_back(&v[i]);
        }
    };
    add("v", c.state.v);
    add("d", c.state.d);
    add("q", c.state.q);
    add("forcing", c.forcing);
    const json header{{"grid",
                       {{"dim", g.dim()},
                        {"n", g.n()},
                        {"box_length", g.box_length()},
                        {"dealias_fraction", g.dealias_fraction()}}},
                      {"time", c.state.t},
                      {"params", params_json(p)},
                      {"fields", names}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << header.dump() << '\n';
    for (const ScalarField* f : fields) put_doubles(out, *f);
    if (!out) throw IoError("write failed: " + path.string());
}

Checkpoint read_checkpoint(const fs::path& path, Params* params) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    json h;
    try {
        h = json::parse(line);
        const auto& gj = h.at("grid");
        const GridPtr g = Grid::create(gj.at("dim").get<int>(), gj.at("n").get<int>(),
                                       gj.at("box_length").get<double>(), gj.at("dealias_fraction").get<double>());
        if (params) {
            const auto& pj = h.at("params");
            params->sigma0 = pj.at("sigma0").get<double>();
            params->sigma1 = pj.at("sigma1").get<double>();
            params->mu = pj.at("mu").get<double>();
            params->e = pj.at("e").get<std::array<double, 3>>();
        }
        Checkpoint c{State::equilibrium(g), {}};
        c.state.t = h.at("time").get<double>();
        c.state.v = VectorField{};
        for (const auto& name : h.at("fields").get<std::vector<std::string>>()) {
            ScalarField f(g);
            get_doubles(in, f);
            const std::string base = name.substr(0, name.rfind('_'));
            const int idx = std::stoi(name.substr(name.rfind('_') + 1));
            if (base == "v")
                c.state.v.push_back(std::move(f));
            else if (base == "d")
                c.state.d[idx] = std::move(f);
            else if (base == "q")
                c.state.q[idx] = std::move(f);
            else if (base == "forcing")
                c.forcing.push_back(std::move(f));
            else
                throw IoError("unknown checkpoint field '" + name + "'");
        }
        return c;
    } catch (const json::exception& e) {
        throw IoError(path.string() + ": bad checkpoint header: " + e.what());
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

namespace {

std::vector<std::string> extra_header(int K) {
    std::vector<std::string> h{"t"};
    const int levels = std::max(K - 1, 0);
    for (int k = 0; k <= levels; ++k) h.push_back("good_unknown_" + std::to_string(k));
    for (int k = 0; k <= levels; ++k) h.push_back("cone_hessian_" + std::to_string(k));
    for (int k = 0; k <= K; ++k) h.push_back("mod_energy_" + std::to_string(k));
    h.emplace_back("lightcone_empty");
    h.emplace_back("modified_equivalent");
    return h;
}

std::vector<double> extra_row(const DiagnosticsFrame& f) {
    std::vector<double> r{f.t};
    r.insert(r.end(), f.good_unknown_norm.begin(), f.good_unknown_norm.end());
    r.insert(r.end(), f.cone_hessian_norm.begin(), f.cone_hessian_norm.end());
    r.insert(r.end(), f.modified_energy.begin(), f.modified_energy.end());
    r.push_back(f.lightcone_empty ? 1.0 : 0.0);
    r.push_back(f.modified_equivalent ? 1.0 : 0.0);
    return r;
}

std::vector<std::vector<double>> read_csv(const fs::path& path, const std::vector<std::string>& expected) {
    std::istringstream in(read_text(path));
    std::string line;
    std::getline(in, line);
    if (split(line, ',') != expected) throw IoError(path.string() + ": unexpected header");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        for (const auto& cell : split(line, ',')) row.push_back(parse_double(cell));
        if (row.size() != expected.size()) throw IoError(path.string() + ": ragged row");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string series_csv(const std::vector<DiagnosticsFrame>& frames, int K) {
    std::string text = csv_line(csv_header(K));
    for (const auto& f : frames) text += csv_line(csv_row(f));
    return text;
}

}  // namespace

void write_run(const fs::path& dir, const RunRecord& r) {
    make_dirs(dir);
    const int K = r.config.kappa_max;
    write_text(dir / "config.json", r.config.to_json());
    write_text(dir / "series.csv", series_csv(r.frames, K));
    std::string extra = csv_line(extra_header(K));
    for (const auto& f : r.frames) extra += csv_line(extra_row(f));
    write_text(dir / "series_extra.csv", extra);
    if (!r.checkpoints.empty()) {
        make_dirs(dir / "checkpoints");
        for (std::size_t i = 0; i < r.checkpoints.size(); ++i)
            write_checkpoint(checkpoint_name(dir / "checkpoints", i), r.checkpoints[i], r.config.params);
    }
    const json status{{"status", to_string(r.status)},
                      {"end_time", r.end_time},
                      {"dt", r.dt},
                      {"message", r.message},
                      {"initial_norm", r.initial_norm},
                      {"frames", r.frames.size()}};
    write_text(dir / "status.json", status.dump(2) + "\n");
}

RunRecord read_run(const fs::path& dir, bool load_checkpoints) {
    RunRecord r;
    r.config = ScenarioConfig::load(dir / "config.json");
    const int K = r.config.kappa_max;
    const int levels = std::max(K - 1, 0) + 1;
    try {
        const json st = json::parse(read_text(dir / "status.json"));
        r.status = status_from_string(st.at("status").get<std::string>());
        r.end_time = st.at("end_time").get<double>();
        r.dt = st.at("dt").get<double>();
        r.message = st.at("message").get<std::string>();
        r.initial_norm = st.at("initial_norm").get<double>();
    } catch (const json::exception& e) {
        throw IoError((dir / "status.json").string() + ": " + e.what());
    }
    const auto main = read_csv(dir / "series.csv", csv_header(K));
    const auto extra = read_csv(dir / "series_extra.csv", extra_header(K));
    if (main.size() != extra.size()) throw IoError(dir.string() + ": series files disagree in length");
    for (std::size_t i = 0; i < main.size(); ++i) {
        const auto& m = main[i];
        const auto& x = extra[i];
        DiagnosticsFrame f;
        std::size_t c = 0;
        auto take = [&](std::size_t n) {
            std::vector<double> v(m.begin() + static_cast<long>(c), m.begin() + static_cast<long>(c + n));
            c += n;
            return v;
        };
        const auto k1 = static_cast<std::size_t>(K + 1);
        f.t = m[c++];
        f.E_v = take(k1);
        f.E_d = take(k1);
        f.X_d = take(static_cast<std::size_t>(K));
        f.linf_v = m[c++];
        f.linf_grad_v = m[c++];
        f.linf_grad2_v = m[c++];
        f.linf_dtv = m[c++];
        f.linf_dZd = take(k1);
        c++;
        f.nullform_ratio = m[c++];
        c++;
        f.div_v_max = m[c++];
        f.constraint_drift = m[c++];
        f.boundary_mass = m[c++];
        const auto L = static_cast<long>(levels);
        f.good_unknown_norm.assign(x.begin() + 1, x.begin() + 1 + L);
        f.cone_hessian_norm.assign(x.begin() + 1 + L, x.begin() + 1 + 2 * L);
        f.modified_energy.assign(x.begin() + 1 + 2 * L, x.begin() + 1 + 2 * L + K + 1);
        f.lightcone_empty = x[x.size() - 2] != 0.0;
        f.modified_equivalent = x.back() != 0.0;
        r.frames.push_back(std::move(f));
    }
    if (load_checkpoints && fs::exists(dir / "checkpoints")) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(dir / "checkpoints"))
            if (e.path().extension() == ".bin") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) r.checkpoints.push_back(read_checkpoint(f));
    }
    return r;
}

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& value, std::array<double, 2> window,
                   bool log_corrected) {
    if (t.size() != value.size()) throw ConfigError("time and value series differ in length");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < window[0] || t[i] > window[1]) continue;
        if (!(value[i] > 0.0)) throw DomainError("nonpositive value in fit window");
        const double tb = std::sqrt(1.0 + t[i] * t[i]);
        double y = std::log(value[i]);
        if (log_corrected) {
            if (!(t[i] > 0.0)) throw DomainError("log-corrected fit needs t > 0");
            y -= 0.5 * std::log(std::log(tb));
        }
        xs.push_back(std::log(tb));
        ys.push_back(y);
    }
    if (xs.size() < 4) throw InsufficientDataError("decay fit needs at least 4 samples in the window");
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / n;
        my += ys[i] / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    DecayFit fit;
    fit.samples = xs.size();
    fit.exponent = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.exponent * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - fit.intercept - fit.exponent * xs[i];
        rss += e * e;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

DecayFit fit_column(const RunRecord& r, const std::string& name, bool log_corrected) {
    auto w = r.config.window();
    w[1] = std::min(w[1], r.end_time);
    return fit_decay(column(r.frames, "t"), column(r.frames, name), w, log_corrected);
}

std::vector<std::string> tracked_columns(int K) {
    std::vector<std::string> c{"linf_v", "linf_grad_v", "linf_grad2_v", "linf_dtv", "linf_dZd_0",
                               "E_v_" + std::to_string(K), "E_d_" + std::to_string(K + 1)};
    if (K >= 1) c.push_back("X_d_" + std::to_string(K + 1));
    c.emplace_back("good_unknown");
    c.emplace_back("nullform_ratio");
    return c;
}

namespace {

double taylor_green_control(double mu) {
    const GridPtr g = Grid::create(2, 16, 2.0 * M_PI);
    OracleSpec spec;
    spec.kind = OracleKind::taylor_green;
    spec.amplitude = 1.0;
    spec.mu = mu;
    State s = taylor_green_oracle(g, spec, 0.0);
    const Stepper st(g, Params{1.0, 0.0, mu}, 1e-2);
    std::vector<double> ts, ys;
    for (int k = 0; k <= 100; ++k) {
        if (k % 10 == 0) {
            ts.push_back(s.t);
            ys.push_back(0.5 * std::log(norm_sq(s.v)));
        }
        if (k < 100) s = st.step(s);
    }
    const auto n = static_cast<double>(ts.size());
    double mt = 0.0, my = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        mt += ts[i] / n;
        my += ys[i] / n;
    }
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - mt) * (ts[i] - mt);
        sty += (ts[i] - mt) * (ys[i] - my);
    }
    return -sty / stt;
}

template <class T>
std::vector<T> or_base(const std::vector<T>& axis, T base) {
    return axis.empty() ? std::vector<T>{base} : axis;
}

std::vector<double> fitted_exponents(const RunRecord& r) {
    std::vector<double> out;
    for (const auto& name : tracked_columns(r.config.kappa_max)) {
        try {
            out.push_back(fit_column(r, name).exponent);
        } catch (const Error&) {
            out.push_back(std::nan(""));
        }
    }
    return out;
}

std::string run_dir_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "run_%03zu", i);
    return buf;
}

std::string summary_csv(const SweepResult& res) {
    std::string text = csv_line(res.summary_header());
    for (const auto& row : res.summary_rows()) text += csv_line(row);
    return text;
}

}  // namespace

std::vector<std::string> SweepResult::summary_header() const {
    std::vector<std::string> h{"run", "epsilon", "mu", "sigma1", "n_points", "status", "end_time",
                               "final_E_v_0", "final_E_d_1"};
    const int K = entries.empty() ? 2 : entries.front().config.kappa_max;
    for (const auto& c : tracked_columns(K)) h.push_back("exp_" + c);
    h.emplace_back("control_rate");
    return h;
}

std::vector<std::vector<std::string>> SweepResult::summary_rows() const {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        std::vector<std::string> row{std::to_string(i), format_double(e.config.epsilon),
                                     format_double(e.config.params.mu), format_double(e.config.params.sigma1),
                                     std::to_string(e.config.n_points)};
        if (e.record && !e.record->frames.empty()) {
            const auto& last = e.record->frames.back();
            row.push_back(to_string(e.record->status));
            row.push_back(format_double(e.record->end_time));
            row.push_back(format_double(last.E_v.front()));
            row.push_back(format_double(last.E_d.front()));
        } else {
            row.insert(row.end(), {"error", "nan", "nan", "nan"});
        }
        for (double x : e.exponents) row.push_back(format_double(x));
        row.push_back(format_double(e.control_rate));
        rows.push_back(std::move(row));
    }
    return rows;
}

SweepResult run_sweep(const ScenarioConfig& base, const SweepAxes& axes, const SweepOptions& options) {
    base.validate();
    const auto eps = or_base(axes.epsilon, base.epsilon);
    const auto mus = or_base(axes.mu, base.params.mu);
    const auto s1s = or_base(axes.sigma1, base.params.sigma1);
    const auto ns = or_base(axes.n_points, base.n_points);
    const std::size_t total = eps.size() * mus.size() * s1s.size() * ns.size();
    if (total > options.max_runs)
        throw ConfigError("sweep has " + std::to_string(total) + " runs, above the cap of " +
                          std::to_string(options.max_runs));

    SweepResult res;
    for (double e : eps)
        for (double mu : mus)
            for (double s1 : s1s)
                for (int n : ns) {
                    ScenarioConfig& c = res.entries.emplace_back().config;
                    c = base;
                    c.epsilon = e;
                    c.params.mu = mu;
                    c.params.sigma1 = s1;
                    c.n_points = n;
                }
    if (options.out_dir) make_dirs(*options.out_dir);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < res.entries.size(); i = next++) {
            SweepEntry& entry = res.entries[i];
            try {
                RunOptions ro;
                if (options.out_dir) ro.checkpoint_dir = *options.out_dir / run_dir_name(i) / "checkpoints";
                entry.record = run_scenario(entry.config, ro);
                entry.exponents = fitted_exponents(*entry.record);
                entry.control_rate = taylor_green_control(entry.config.params.mu);
                if (options.out_dir) write_run(*options.out_dir / run_dir_name(i), *entry.record);
            } catch (const std::exception& e) {
                entry.error = e.what();
                entry.exponents.assign(tracked_columns(entry.config.kappa_max).size(), std::nan(""));
            }
        }
    };
    unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, res.entries.size()));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    if (options.out_dir) write_text(*options.out_dir / "summary.csv", summary_csv(res));
    return res;
}

namespace {

std::string svg_plot(const std::string& title, const std::vector<double>& x, const std::vector<double>& y,
                     const std::optional<DecayFit>& fit) {
    constexpr double W = 480.0, H = 320.0, M = 40.0;
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                  W, H, W, H);
    out += buf;
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"20\" font-family=\"monospace\" font-size=\"12\">%s</text>\n", M,
                  title.c_str());
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.0f\" y=\"%.0f\" width=\"%.0f\" height=\"%.0f\" fill=\"none\" stroke=\"black\"/>\n", M, M,
                  W - 2 * M, H - 2 * M);
    out += buf;
    if (x.size() >= 2) {
        const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
        const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
        const double x0 = *xmin, xs = std::max(*xmax - *xmin, 1e-12);
        const double y0 = *ymin, ys = std::max(*ymax - *ymin, 1e-12);
        auto px = [&](double v) { return M + (v - x0) / xs * (W - 2 * M); };
        auto py = [&](double v) { return H - M - (v - y0) / ys * (H - 2 * M); };
        out += "<polyline fill=\"none\" stroke=\"navy\" points=\"";
        for (std::size_t i = 0; i < x.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", i ? " " : "", px(x[i]), py(y[i]));
            out += buf;
        }
        out += "\"/>\n";
        if (fit) {
            const double a = fit->intercept + fit->exponent * x0, b = fit->intercept + fit->exponent * (x0 + xs);
            std::snprintf(buf, sizeof buf,
                          "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"firebrick\" "
                          "stroke-dasharray=\"4 3\"/>\n",
                          px(x0), py(a), px(x0 + xs), py(b));
            out += buf;
            std::snprintf(buf, sizeof buf,
                          "<text x=\"%.0f\" y=\"%.0f\" font-family=\"monospace\" font-size=\"11\">slope %.4f</text>\n",
                          W - 150.0, H - 12.0, fit->exponent);
            out += buf;
        }
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.0f\" y=\"%.0f\" font-family=\"monospace\" font-size=\"11\">log &lt;t&gt;</text>\n", M,
                  H - 12.0);
    out += buf;
    out += "</svg>\n";
    return out;
}

}  // namespace

void emit_report(const std::vector<RunRecord>& records, const fs::path& out_dir) {
    make_dirs(out_dir);
    SweepResult summary;
    for (const auto& r : records) {
        SweepEntry& e = summary.entries.emplace_back();
        e.config = r.config;
        e.record = r;
        e.exponents = fitted_exponents(r);
        e.control_rate = std::nan("");
    }
    write_text(out_dir / "summary.csv", summary_csv(summary));

    for (std::size_t i = 0; i < records.size(); ++i) {
        const RunRecord& r = records[i];
        const fs::path dir = out_dir / run_dir_name(i);
        make_dirs(dir);
        write_text(dir / "series.csv", series_csv(r.frames, r.config.kappa_max));
        const auto ts = column(r.frames, "t");
        for (const auto& name : tracked_columns(r.config.kappa_max)) {
            const auto vals = column(r.frames, name);
            std::optional<DecayFit> fit;
            try {
                fit = fit_column(r, name);
            } catch (const Error&) {
            }
            std::string dat = "# t log_tb value log_value fit_log_value\n";
            std::vector<double> lx, ly;
            for (std::size_t k = 0; k < ts.size(); ++k) {
                const double ltb = std::log(std::sqrt(1.0 + ts[k] * ts[k]));
                const double lv = vals[k] > 0.0 ? std::log(vals[k]) : std::nan("");
                const double lf = fit ? fit->intercept + fit->exponent * ltb : std::nan("");
                dat += format_double(ts[k]) + " " + format_double(ltb) + " " + format_double(vals[k]) + " " +
                       format_double(lv) + " " + format_double(lf) + "\n";
                if (vals[k] > 0.0 && std::isfinite(lv)) {
                    lx.push_back(ltb);
                    ly.push_back(lv);
                }
            }
            write_text(dir / (name + ".dat"), dat);
            write_text(dir / (name + ".svg"), svg_plot(name, lx, ly, fit));
        }
    }
}

}  // namespace iel
