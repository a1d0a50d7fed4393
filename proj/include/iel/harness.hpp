#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "iel/diagnostics.hpp"
#include "iel/dynamics.hpp"
#include "iel/verification.hpp"

namespace iel {

/// Initial-data families. The last two are oracle controls.
enum class Family { bump_director, bump_velocity, mixed, geodesic, taylor_green };

std::string to_string(Family f);
/// Accepts "bump-director", "bump-velocity", "mixed", "geodesic", "taylor-green".
Family family_from_string(const std::string& name);

struct ScenarioConfig {
    int dim = 3;
    int n_points = 32;
    double box_length = 32.0;
    Params params;
    double epsilon = 1e-2;
    Family family = Family::mixed;
    double support_radius = 4.0;
    double horizon = 10.0;
    double sample_dt = 1.0;
    int kappa_max = 2;
    std::uint64_t seed = 0;

    /// Optional: fixed step size (0 picks the stability limit of the initial data).
    double dt = 0.0;
    /// Optional: keep a checkpoint every this many frames (0 keeps none).
    int checkpoint_stride = 1;
    /// Optional: window for decay fits; defaults to [horizon / 8, horizon].
    std::optional<std::array<double, 2>> fit_window;

    /// Throws ConfigError on violated invariants, including
    /// support_radius + horizon >= L/2 for the bump families.
    void validate() const;
    std::array<double, 2> window() const;

    std::string to_json() const;
    /// Parses and validates. Unknown or missing required keys are ConfigErrors.
    static ScenarioConfig parse(const std::string& json_text);
    /// Throws ConfigError naming the path when the file cannot be read.
    static ScenarioConfig load(const std::filesystem::path& path);

    bool operator==(const ScenarioConfig&) const = default;
};

/// d0 = exp_e(eps phi w), d1 = eps psi w' projected onto the tangent plane of d0,
/// v0 = eps curl(chi A) (stream function in 2D). Exact equilibrium at eps = 0.
State make_initial_data(const ScenarioConfig& cfg);

/// A stored snapshot together with the Duhamel forcing at that time.
struct Checkpoint {
    State state;
    VectorField forcing;
};

enum class RunStatus { completed, blowup, boundary_contact };

std::string to_string(RunStatus s);
RunStatus status_from_string(const std::string& name);

struct RunRecord {
    ScenarioConfig config;
    std::vector<DiagnosticsFrame> frames;
    std::vector<Checkpoint> checkpoints;
    RunStatus status = RunStatus::completed;
    /// Time of the last valid state.
    double end_time = 0.0;
    double dt = 0.0;
    std::string message;
    /// Discrete H^kappa_Lambda norm of the initial data, kappa = kappa_max.
    double initial_norm = 0.0;

    /// Velocity and forcing at the checkpoints, ready for duhamel_reconstruct.
    NonlinearRecord nonlinear_record() const;
};

struct RunOptions {
    /// Called after every frame.
    std::function<void(const DiagnosticsFrame&)> on_frame;
    /// When set, checkpoints are written here as they are taken and not kept in memory.
    std::optional<std::filesystem::path> checkpoint_dir;
};

/// Steps to the last sampling time not beyond the horizon. Blow-up and boundary
/// contact (boundary_mass above 1e-8) end the run and are recorded in the status.
RunRecord run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

/// Column names of the time-series CSV for a given kappa_max.
std::vector<std::string> csv_header(int kappa_max);
std::vector<double> csv_row(const DiagnosticsFrame& f);
/// Values of one named column; throws ConfigError for unknown names.
std::vector<double> column(const std::vector<DiagnosticsFrame>& frames, const std::string& name);

/// Header line of JSON (grid, time, params, field manifest), then little-endian
/// float64 payloads, row-major, in manifest order.
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& c, const Params& p);
Checkpoint read_checkpoint(const std::filesystem::path& path, Params* params = nullptr);

/// config.json, series.csv, series_extra.csv, status.json and checkpoints/.
void write_run(const std::filesystem::path& dir, const RunRecord& r);
RunRecord read_run(const std::filesystem::path& dir, bool load_checkpoints = true);

struct DecayFit {
    double exponent = 0.0;
    double intercept = 0.0;
    /// Root-mean-square residual of the log fit.
    double residual = 0.0;
    std::size_t samples = 0;
};

/// Least-squares slope of log(value) against log<t> over the window. With
/// log_corrected the model is C <t>^a (ln<t>)^{1/2}. Throws InsufficientDataError
/// with fewer than 4 samples and DomainError on nonpositive values.
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& value, std::array<double, 2> window,
                   bool log_corrected = false);

/// Fit of one named column of a run over its configured window.
DecayFit fit_column(const RunRecord& r, const std::string& name, bool log_corrected = false);

struct SweepAxes {
    std::vector<double> epsilon;
    std::vector<double> mu;
    std::vector<double> sigma1;
    std::vector<int> n_points;
};

struct SweepOptions {
    std::size_t max_runs = 64;
    /// Worker threads; 0 uses the hardware concurrency.
    unsigned workers = 0;
    /// When set, each run is written to out_dir/run_NNN and the summary to out_dir/summary.csv.
    std::optional<std::filesystem::path> out_dir;
};

struct SweepEntry {
    ScenarioConfig config;
    std::optional<RunRecord> record;
    std::string error;
    /// Fitted exponents of the tracked columns (NaN when no fit was possible).
    std::vector<double> exponents;
    /// Decay constant of a Taylor-Green control with this run's viscosity (2 mu exactly).
    double control_rate = 0.0;
};

struct SweepResult {
    std::vector<SweepEntry> entries;
    std::vector<std::string> summary_header() const;
    std::vector<std::vector<std::string>> summary_rows() const;
};

/// Empty axes keep the base value. Throws ConfigError when the product exceeds max_runs.
SweepResult run_sweep(const ScenarioConfig& base, const SweepAxes& axes, const SweepOptions& options = {});

/// Columns fitted in summaries and drawn in reports.
std::vector<std::string> tracked_columns(int kappa_max);

/// summary.csv plus, per run, series.csv and a .dat/.svg pair per tracked column.
void emit_report(const std::vector<RunRecord>& records, const std::filesystem::path& out_dir);

}  // namespace iel
