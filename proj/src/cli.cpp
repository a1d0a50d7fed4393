#include "iel/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "iel/errors.hpp"
#include "iel/harness.hpp"
#include "iel/suites.hpp"

namespace iel::cli {

namespace fs = std::filesystem;

namespace {

std::string format(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_number(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double x = std::stod(text, &used);
        if (used == text.size()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError("cannot parse " + what + " '" + text + "'");
}

std::array<double, 2> parse_window(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ConfigError("window must have the form T0:T1, got '" + text + "'");
    const std::array<double, 2> w{parse_number(text.substr(0, colon), "window start"),
                                  parse_number(text.substr(colon + 1), "window end")};
    if (!(w[0] < w[1])) throw ConfigError("window start must precede its end in '" + text + "'");
    return w;
}

/// Columns "t" and `name` of a comma-separated file with a header row.
std::pair<std::vector<double>, std::vector<double>> read_series(const fs::path& path, const std::string& name) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read series file " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty series file");
    const auto header = split(line, ',');
    const auto find = [&](const std::string& key) {
        const auto it = std::find(header.begin(), header.end(), key);
        if (it == header.end()) throw ConfigError(path.string() + ": no column '" + key + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t ti = find("t"), vi = find(name);
    std::vector<double> t, v;
    for (std::size_t row = 2; std::getline(in, line); ++row) {
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != header.size())
            throw ConfigError(path.string() + ": row " + std::to_string(row) + " has the wrong number of cells");
        t.push_back(parse_number(cells[ti], "time"));
        v.push_back(parse_number(cells[vi], name));
    }
    return {t, v};
}

std::vector<RunRecord> collect_runs(const fs::path& in) {
    if (fs::exists(in / "config.json")) return {read_run(in, false)};
    if (!fs::is_directory(in)) throw ConfigError("no run directory at " + in.string());
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(in))
        if (e.is_directory() && fs::exists(e.path() / "config.json")) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
    std::vector<RunRecord> out;
    for (const auto& d : dirs) out.push_back(read_run(d, false));
    return out;
}

int do_run(const fs::path& config, const fs::path& out_dir, std::ostream& out) {
    const ScenarioConfig cfg = ScenarioConfig::load(config);
    fs::remove_all(out_dir / "checkpoints");
    RunOptions options;
    if (cfg.checkpoint_stride > 0) options.checkpoint_dir = out_dir / "checkpoints";
    options.on_frame = [&](const DiagnosticsFrame& f) {
        out << "t " << format(f.t) << "  E_v " << format(f.E_v.back()) << "  E_d " << format(f.E_d.back())
            << "  boundary_mass " << format(f.boundary_mass) << '\n';
    };
    const RunRecord r = run_scenario(cfg, options);
    write_run(out_dir, r);
    out << "status " << to_string(r.status) << " at t " << format(r.end_time);
    if (!r.message.empty()) out << ": " << r.message;
    out << '\n';
    return r.status == RunStatus::blowup ? blowup : ok;
}

int do_verify(const std::string& suite, std::ostream& out) {
    bool all_passed = true;
    for (const auto& c : run_suite(suite)) {
        out << (c.passed ? "PASS " : "FAIL ") << c.suite << ": " << c.name << " = " << format(c.value) << " in ["
            << format(c.lower) << ", " << format(c.upper) << "]\n";
        all_passed = all_passed && c.passed;
    }
    return all_passed ? ok : verification_failure;
}

int do_sweep(const fs::path& config, const fs::path& out_dir, const SweepAxes& axes, std::size_t max_runs,
             unsigned workers, std::ostream& out) {
    const ScenarioConfig base = ScenarioConfig::load(config);
    SweepOptions options;
    options.max_runs = max_runs;
    options.workers = workers;
    options.out_dir = out_dir;
    const SweepResult res = run_sweep(base, axes, options);
    const auto header = res.summary_header();
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : res.summary_rows()) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
    const bool any_blowup = std::any_of(res.entries.begin(), res.entries.end(), [](const SweepEntry& e) {
        return e.record && e.record->status == RunStatus::blowup;
    });
    return any_blowup ? blowup : ok;
}

int do_fit(const fs::path& series, const std::string& name, const std::string& window, bool log_corrected,
           std::ostream& out) {
    const auto [t, v] = read_series(series, name);
    const DecayFit fit = fit_decay(t, v, parse_window(window), log_corrected);
    out << "exponent " << format(fit.exponent) << '\n'
        << "intercept " << format(fit.intercept) << '\n'
        << "residual " << format(fit.residual) << '\n'
        << "samples " << fit.samples << '\n';
    return ok;
}

int do_report(const fs::path& in, const fs::path& out_dir, std::ostream& out) {
    const auto runs = collect_runs(in);
    emit_report(runs, out_dir);
    out << "report of " << runs.size() << " run(s) written to " << out_dir.string() << '\n';
    return ok;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Inertial Ericksen-Leslie simulation and verification toolkit", "iel"};
    app.require_subcommand(1, 1);

    std::string config, out_dir = "out", in_dir, suite = "all", series, column, window;
    bool log_corrected = false;
    SweepAxes axes;
    std::size_t max_runs = 64;
    unsigned workers = 0;

    auto* run = app.add_subcommand("run", "Run one scenario and write its time series and checkpoints");
    run->add_option("--config", config, "Scenario JSON file")->required();
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Run a verification suite and report PASS/FAIL per check");
    verify->add_option("--suite", suite, "Suite to run")
        ->check(CLI::IsMember({"oracles", "commutation", "sobolev", "duhamel", "all"}))
        ->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep around a base scenario");
    sweep->add_option("--config", config, "Base scenario JSON file")->required();
    sweep->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sweep->add_option("--epsilon", axes.epsilon, "Data sizes to sweep");
    sweep->add_option("--mu", axes.mu, "Viscosities to sweep");
    sweep->add_option("--sigma1", axes.sigma1, "Coupling constants to sweep");
    sweep->add_option("--n-points", axes.n_points, "Grid sizes to sweep");
    sweep->add_option("--max-runs", max_runs, "Largest admissible number of runs")->capture_default_str();
    sweep->add_option("--workers", workers, "Worker threads (0 uses all cores)")->capture_default_str();

    auto* fit = app.add_subcommand("fit-decay", "Fit a power-law decay exponent to one column of a series");
    fit->add_option("--series", series, "CSV file with a header row and a t column")->required();
    fit->add_option("--column", column, "Column to fit")->required();
    fit->add_option("--window", window, "Fit window T0:T1")->required();
    fit->add_flag("--log-corrected", log_corrected, "Fit C <t>^a (ln <t>)^(1/2) instead of C <t>^a");

    auto* report = app.add_subcommand("report", "Regenerate summary, data files and plots from stored runs");
    report->add_option("--in", in_dir, "A run directory or a directory of run directories")->required();
    report->add_option("--out", out_dir, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return ok;
        if (e.get_name() != "CallForHelp") err << app.help();
        return config_error;
    }

    try {
        if (*run) return do_run(config, out_dir, out);
        if (*verify) return do_verify(suite, out);
        if (*sweep) return do_sweep(config, out_dir, axes, max_runs, workers, out);
        if (*fit) return do_fit(series, column, window, log_corrected, out);
        return do_report(in_dir, out_dir, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return config_error;
    } catch (const InsufficientDataError& e) {
        err << "insufficient data: " << e.what() << '\n';
        return config_error;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return config_error;
    } catch (const BlowupError& e) {
        err << "blow-up: " << e.what() << '\n';
        return blowup;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return failure;
    }
}

}  // namespace iel::cli
