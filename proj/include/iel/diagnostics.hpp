#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "iel/dynamics.hpp"
#include "iel/jet.hpp"

namespace iel {

/// Time jets of the solution at one instant, obtained by differentiating the
/// equations (never by differencing in time).
struct SolutionJets {
    double t = 0.0;
    /// Director jet; coefficient 1 is q.
    VectorJet d;
    /// Velocity jet (dim components); coefficient 1 is momentum_rhs.
    VectorJet v;
    /// Optional synthetic scalar with its time derivatives.
    std::optional<ScalarJet> scalar;
};

/// Builds jets with director order `d_order` and velocity order `v_order`.
SolutionJets solution_jets(const State& s, const Params& p, int d_order, int v_order);

/// Recent states with their right-hand sides, plus jets of the newest one.
class FieldHistory {
public:
    struct Entry {
        State state;
        VectorField dv_dt;
        DirectorField dq_dt;
    };

    FieldHistory(Params p, int kappa_max = 2, std::size_t capacity = 3);
    /// History holding a single state.
    static FieldHistory from_state(const State& s, const Params& p, int kappa_max = 2);
    /// History made of explicit jets (no stored states).
    static FieldHistory synthetic(SolutionJets jets, int kappa_max = 2);

    void push(const State& s);
    std::size_t size() const { return entries_.size(); }
    /// 0 is the oldest entry still kept.
    const Entry& operator[](std::size_t i) const { return entries_[i]; }
    const Entry& latest() const;
    int kappa_max() const { return kappa_max_; }
    const Params& params() const { return params_; }
    /// Jets of the newest entry, with orders sufficient for kappa_max.
    const SolutionJets& jets() const;

private:
    Params params_;
    int kappa_max_;
    std::size_t capacity_;
    std::deque<Entry> entries_;
    mutable std::optional<SolutionJets> jets_;
};

enum class OpKind { time_derivative, translation, rotation, scaling };

struct VectorFieldOp {
    OpKind kind;
    int axis = 0;
};

enum class Target { velocity, director, scalar };

/// The commuting fields available in a given dimension, in composition order:
/// S, d_t, d_1..d_dim, then the rotations (Omega_1..3 in 3D, Omega_3 in 2D).
std::vector<VectorFieldOp> vectorfield_ops(int dim);

/// Applies one operator to a jet. d_t and S lower the jet order by one.
/// Rotations of velocity add A_i v; rotations of scalars and directors do not.
VectorJet apply_vectorfield(const VectorJet& f, const VectorFieldOp& op, double t, Target target);

/// Field version: d_t and S take the time derivative of the target from `hist`
/// (f is taken to be that target's current value). Throws MissingHistoryError
/// when those are requested without a history.
VectorField apply_vectorfield(const VectorField& f, const VectorFieldOp& op, const FieldHistory* hist,
                              Target target);

/// One node of the Z^a tree. `ops` lists indices into vectorfield_ops in the
/// order they were applied (innermost first, nonincreasing), so S is always outermost.
struct ZNode {
    std::vector<int> ops;
    VectorJet d;
    VectorJet v;
};

/// Visits every multiset a with |a| <= max_depth exactly once, parents before children.
/// Jets at depth m are truncated to (root order - m). Throws MissingHistoryError
/// when a root jet is shorter than max_depth.
void walk_z_tree(const SolutionJets& jets, int max_depth, const std::function<void(const ZNode&)>& visit);

struct DiagnosticsFrame {
    double t = 0.0;
    /// E^v_kappa, kappa = 0..K.
    std::vector<double> E_v;
    /// E^d_{kappa+1}, kappa = 0..K.
    std::vector<double> E_d;
    /// X^d_kappa, kappa = 2..K+1.
    std::vector<double> X_d;
    double linf_v = 0.0;
    double linf_grad_v = 0.0;
    double linf_grad2_v = 0.0;
    double linf_dtv = 0.0;
    /// max over |a| <= kappa of |d Z^a d|, kappa = 0..K.
    std::vector<double> linf_dZd;
    /// ||<t>(d_t + d_r) d Z^a d|| on r >= <t>/2 over |a| <= level, level = 0..max(K-1, 0).
    std::vector<double> good_unknown_norm;
    /// Same aggregation with the full second derivative in place of (d_t + d_r) d.
    std::vector<double> cone_hessian_norm;
    double nullform_ratio = 0.0;
    bool lightcone_empty = false;
    /// Modified energy, kappa = 0..K.
    std::vector<double> modified_energy;
    bool modified_equivalent = true;
    double div_v_max = 0.0;
    double constraint_drift = 0.0;
    double boundary_mass = 0.0;

    bool operator==(const DiagnosticsFrame&) const = default;
};

struct DiagnosticsConfig {
    int kappa_max = 2;
};

/// Every diagnostic at one instant from a single walk of the Z tree.
DiagnosticsFrame compute_frame(const State& s, const FieldHistory& hist, double constraint_drift = 0.0);

struct EnergyPair {
    double E_v = 0.0;
    double E_d = 0.0;
};

/// (E^v_kappa, E^d_{kappa+1}). Throws ConfigError when kappa > hist.kappa_max().
EnergyPair generalized_energy(const State& s, const FieldHistory& hist, int kappa);

/// X^d_kappa = ||<r-t> d^2 Z^{kappa-2} d||^2. Throws ConfigError when kappa < 2.
/// `unit_weight` replaces <r-t> by 1.
double weighted_X_norm(const State& s, const FieldHistory& hist, int kappa, bool unit_weight = false);

struct LightconeResult {
    double good_unknown_norm = 0.0;
    double nullform_ratio = 0.0;
    bool region_empty = false;
    /// Integral over the cone of sum_i (w_i d_t + d_i) d . (w_i d_t - d_i) d.
    double nullform_factorized = 0.0;
    /// Integral over the cone of |d_t d|^2 - |grad d|^2.
    double nullform_direct = 0.0;
};

LightconeResult lightcone_diagnostics(const State& s, const FieldHistory& hist, int kappa);

struct DecayProfile {
    double linf_v = 0.0;
    double linf_grad_v = 0.0;
    double linf_grad2_v = 0.0;
    double linf_dtv = 0.0;
    std::vector<double> linf_dZd;
};

DecayProfile pointwise_decay_profile(const State& s, const FieldHistory& hist);

struct ModifiedEnergy {
    double value = 0.0;
    /// (1/2) E^d_{kappa+1}.
    double half_energy = 0.0;
    /// value within [half_energy / 2, 2 half_energy].
    bool equivalent = true;
};

/// sum_{|a|<=kappa} [ 1/2 ||d Z^a d||^2 - 1/2 ||(v.grad) Z^a d||^2
///                    + int (Z^a v.grad) d . d_t Z^a d + 1/2 ||(Z^a v.grad) d||^2 ].
ModifiedEnergy modified_energy(const State& s, const FieldHistory& hist, int kappa);

/// Lower-order form: sum_{|a|<=kappa} [ 1/2 ||d Z^a d||^2
///                    + sum_{b+c=a} C_a^b int (Z^b v.grad Z^c d) . d_t Z^a d ].
/// Stores every node; intended for small grids.
ModifiedEnergy modified_energy_lower(const State& s, const FieldHistory& hist, int kappa);

/// Share of the perturbation density |v|^2 + |grad d|^2 + |q|^2 + |d - e|^2 lying
/// within L/16 of the box faces. Zero for the exact equilibrium.
double boundary_mass(const State& s, const Params& p);

struct MonitorReport {
    double sup_Ev_ratio = 0.0;
    double sup_Ed_lower_ratio = 0.0;
    double growth_exponent = 0.0;
    double sup_X_over_E = 0.0;
    double sup_decay_ratio = 0.0;
    double epsilon = 0.0;
};

/// Bootstrap-style summary of a time series. Needs at least 4 frames.
MonitorReport bootstrap_monitor(const std::vector<DiagnosticsFrame>& series, double epsilon);

/// Discrete H^kappa_Lambda norm of (v, d - e, q) with Lambda = {grad, rotations, r d_r}.
double initial_data_norm(const State& s, int kappa);

}  // namespace iel
