#include "iel/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "iel/errors.hpp"
#include "iel/rhs.hpp"
#include "iel/spectral.hpp"

namespace iel {

namespace {

ScalarField deriv_of(const SpectralField& hat, int axis) {
    SpectralField c = hat;
    apply_derivative(c, axis, 1);
    return inverse(c);
}

ScalarField deriv2_of(const SpectralField& hat, int a, int b) {
    SpectralField c = hat;
    if (a == b) {
        apply_derivative(c, a, 2);
    } else {
        apply_derivative(c, a, 1);
        apply_derivative(c, b, 1);
    }
    return inverse(c);
}

std::vector<ScalarField> coordinates(const GridPtr& g) {
    std::vector<ScalarField> x;
    for (int a = 0; a < g->dim(); ++a) x.push_back(coordinate_field(g, a));
    return x;
}

/// x_a d_b f - x_b d_a f
ScalarField rotate(const ScalarField& f, int a, int b, const std::vector<ScalarField>& x) {
    const SpectralField hat = forward(f);
    ScalarField out = x[static_cast<std::size_t>(a)] * deriv_of(hat, b);
    out -= x[static_cast<std::size_t>(b)] * deriv_of(hat, a);
    return out;
}

/// x . grad f
ScalarField radial(const ScalarField& f, const std::vector<ScalarField>& x) {
    const SpectralField hat = forward(f);
    ScalarField out(f.grid_ptr());
    for (int a = 0; a < f.grid().dim(); ++a) out += x[static_cast<std::size_t>(a)] * deriv_of(hat, a);
    return out;
}

std::pair<int, int> rotation_plane(int axis) { return {(axis + 1) % 3, (axis + 2) % 3}; }

void check_rotation(int dim, int axis) {
    if (dim == 3 && axis >= 0 && axis < 3) return;
    if (dim == 2 && axis == 2) return;
    throw ConfigError("rotation axis not available in this dimension");
}

template <class Fn>
VectorJet map_coeffs(const VectorJet& f, Fn fn) {
    VectorJet out;
    for (const auto& c : f) {
        std::vector<ScalarField> k;
        for (int i = 0; i <= c.order(); ++i) k.push_back(fn(c[i]));
        out.push_back(ScalarJet(std::move(k)));
    }
    return out;
}

VectorJet truncated(VectorJet f, int order) {
    for (auto& c : f) c.truncate(order);
    return f;
}

double sq(double x) { return x * x; }

}  // namespace

SolutionJets solution_jets(const State& s, const Params& p, int d_order, int v_order) {
    if (d_order < 1 || v_order < 0) throw ConfigError("jet orders must be d >= 1, v >= 0");
    const GridPtr& g = s.grid_ptr();
    const int dim = g->dim();
    const bool fluid = dim >= 2;
    std::vector<VectorField> dk{s.d};
    std::vector<VectorField> qk{s.q};
    std::vector<VectorField> vk{s.v};
    const rhs::Coefficients coeff{p.sigma0, p.sigma1, fluid};
    const int stages = std::max(d_order - 2, v_order - 1);
    for (int k = 0; k <= stages; ++k) {
        const VectorJet V = make_jet(vk);
        const VectorJet D = make_jet(dk);
        const auto gd = rhs::gradients(D);
        if (fluid) {
            const VectorJet M = rhs::momentum(V, gd, p.mu);
            vk.push_back(coefficient(M, k));
        } else {
            vk.push_back(zero_vector(g, dim));
        }
        const VectorJet Q = make_jet(qk);
        const VectorJet dV = make_jet(std::vector<VectorField>(vk.begin() + 1, vk.end()));
        const VectorJet R = rhs::director(V, D, Q, dV, gd, coeff);
        dk.push_back(qk.back());
        qk.push_back(coefficient(R, k));
    }
    if (static_cast<int>(dk.size()) <= d_order) dk.push_back(qk.back());
    dk.resize(static_cast<std::size_t>(d_order) + 1);
    vk.resize(static_cast<std::size_t>(v_order) + 1);
    SolutionJets out;
    out.t = s.t;
    out.d = make_jet(dk);
    out.v = make_jet(vk);
    return out;
}

FieldHistory::FieldHistory(Params p, int kappa_max, std::size_t capacity)
    : params_(p), kappa_max_(kappa_max), capacity_(std::max<std::size_t>(capacity, 1)) {
    if (kappa_max < 0) throw ConfigError("kappa_max must be nonnegative");
}

FieldHistory FieldHistory::from_state(const State& s, const Params& p, int kappa_max) {
    FieldHistory h(p, kappa_max);
    h.push(s);
    return h;
}

FieldHistory FieldHistory::synthetic(SolutionJets jets, int kappa_max) {
    FieldHistory h(Params{}, kappa_max);
    h.jets_ = std::move(jets);
    return h;
}

void FieldHistory::push(const State& s) {
    Entry e;
    e.state = s;
    if (s.grid().dim() >= 2) {
        e.dv_dt = momentum_rhs(s, params_);
        e.dq_dt = director_rhs(s, params_, e.dv_dt);
    } else {
        e.dv_dt = zero_vector(s.grid_ptr(), 1);
        e.dq_dt = director_rhs(s, params_, e.dv_dt);
    }
    entries_.push_back(std::move(e));
    while (entries_.size() > capacity_) entries_.pop_front();
    jets_.reset();
}

const FieldHistory::Entry& FieldHistory::latest() const {
    if (entries_.empty()) throw MissingHistoryError("field history is empty");
    return entries_.back();
}

const SolutionJets& FieldHistory::jets() const {
    if (!jets_) {
        const State& s = latest().state;
        jets_ = solution_jets(s, params_, std::max(kappa_max_ + 1, 2), std::max(kappa_max_, 1));
    }
    return *jets_;
}

std::vector<VectorFieldOp> vectorfield_ops(int dim) {
    std::vector<VectorFieldOp> ops{{OpKind::scaling, 0}, {OpKind::time_derivative, 0}};
    for (int a = 0; a < dim; ++a) ops.push_back({OpKind::translation, a});
    if (dim == 3)
        for (int a = 0; a < 3; ++a) ops.push_back({OpKind::rotation, a});
    if (dim == 2) ops.push_back({OpKind::rotation, 2});
    return ops;
}

VectorJet apply_vectorfield(const VectorJet& f, const VectorFieldOp& op, double t, Target target) {
    if (f.size() == 0) return f;
    const GridPtr& g = f[0].grid_ptr();
    switch (op.kind) {
        case OpKind::time_derivative:
            return time_derivative(f);
        case OpKind::translation:
            return map_coeffs(f, [&](const ScalarField& c) { return spectral_derivative(c, op.axis, 1); });
        case OpKind::rotation: {
            check_rotation(g->dim(), op.axis);
            const auto x = coordinates(g);
            const auto [a, b] = rotation_plane(op.axis);
            VectorJet out = map_coeffs(f, [&](const ScalarField& c) { return rotate(c, a, b, x); });
            if (target == Target::velocity) {
                if (f.size() <= std::max(a, b)) throw ConfigError("velocity has too few components");
                for (int k = 0; k <= std::min(out[a].order(), out[b].order()); ++k) {
                    out[a][k] += f[b][k];
                    out[b][k] -= f[a][k];
                }
            }
            return out;
        }
        case OpKind::scaling: {
            const auto x = coordinates(g);
            VectorJet out;
            for (const auto& c : f) {
                if (c.order() < 1) throw MissingHistoryError("scaling needs a time derivative");
                std::vector<ScalarField> k;
                for (int i = 0; i < c.order(); ++i) {
                    ScalarField s = radial(c[i], x);
                    s.axpy(t, c[i + 1]);
                    s.axpy(static_cast<double>(i), c[i]);
                    k.push_back(std::move(s));
                }
                out.push_back(ScalarJet(std::move(k)));
            }
            return out;
        }
    }
    throw ConfigError("unknown vector field");
}

VectorField apply_vectorfield(const VectorField& f, const VectorFieldOp& op, const FieldHistory* hist,
                              Target target) {
    const bool timed = op.kind == OpKind::time_derivative || op.kind == OpKind::scaling;
    if (!timed) return coefficient(apply_vectorfield(constant_jet(f, 0), op, 0.0, target), 0);
    if (!hist) throw MissingHistoryError("time derivative requested without a field history");
    const SolutionJets& j = hist->jets();
    VectorField dt;
    switch (target) {
        case Target::velocity:
            dt = coefficient(j.v, 1);
            break;
        case Target::director:
            dt = coefficient(j.d, 1);
            break;
        case Target::scalar:
            if (!j.scalar || j.scalar->order() < 1) throw MissingHistoryError("history has no scalar jet");
            dt = VectorField{(*j.scalar)[1]};
            break;
    }
    if (dt.size() != f.size()) throw ConfigError("field does not match the history target");
    return coefficient(apply_vectorfield(make_jet({f, dt}), op, j.t, target), 0);
}

namespace {

void walk(const ZNode& node, int last, int depth, int max_depth, int d_root, int v_root,
          const std::vector<VectorFieldOp>& ops, double t, const std::function<void(const ZNode&)>& visit) {
    if (depth == max_depth) return;
    for (int i = 0; i <= last; ++i) {
        const auto& op = ops[static_cast<std::size_t>(i)];
        ZNode child;
        child.ops = node.ops;
        child.ops.push_back(i);
        child.d = truncated(apply_vectorfield(node.d, op, t, Target::director), d_root - depth - 1);
        child.v = truncated(apply_vectorfield(node.v, op, t, Target::velocity), v_root - depth - 1);
        visit(child);
        walk(child, i, depth + 1, max_depth, d_root, v_root, ops, t, visit);
    }
}

}  // namespace

void walk_z_tree(const SolutionJets& jets, int max_depth, const std::function<void(const ZNode&)>& visit) {
    const int d_root = min_order(jets.d);
    const int v_root = min_order(jets.v);
    if (d_root < max_depth || v_root < max_depth)
        throw MissingHistoryError("solution jets too short for the requested depth");
    const int dim = jets.d[0].grid_ptr()->dim();
    const auto ops = vectorfield_ops(dim);
    ZNode root{{}, jets.d, jets.v};
    visit(root);
    walk(root, static_cast<int>(ops.size()) - 1, 0, max_depth, d_root, v_root, ops, jets.t, visit);
}

namespace {

/// Everything gathered in one walk over |a| <= K.
struct Accum {
    int K = 0;
    std::vector<double> Ev, Ed, X, X_unit, good_sq, hess_sq, mod, linf_dZd;
    double null_num = 0.0, null_den = 0.0, null_fact = 0.0, null_direct = 0.0;
    bool cone_points = false;
    DecayProfile decay;
};

std::vector<std::vector<ScalarField>> director_gradients(const VectorField& d) {
    std::vector<std::vector<ScalarField>> out;
    for (const auto& c : d) {
        const SpectralField hat = forward(c);
        std::vector<ScalarField> g;
        for (int j = 0; j < c.grid().dim(); ++j) g.push_back(deriv_of(hat, j));
        out.push_back(std::move(g));
    }
    return out;
}

void root_velocity_profile(const State& s, const SolutionJets& jets, DecayProfile& out) {
    const Grid& g = s.grid();
    const int dim = g.dim();
    const std::size_t n = g.size();
    std::vector<double> m1(n, 0.0), m2(n, 0.0);
    for (const auto& c : s.v) {
        const SpectralField hat = forward(c);
        for (int i = 0; i < dim; ++i) {
            const ScalarField di = deriv_of(hat, i);
            for (std::size_t p = 0; p < n; ++p) m1[p] += sq(di[p]);
            for (int j = i; j < dim; ++j) {
                const ScalarField dij = deriv2_of(hat, i, j);
                const double w = i == j ? 1.0 : 2.0;
                for (std::size_t p = 0; p < n; ++p) m2[p] += w * sq(dij[p]);
            }
        }
    }
    out.linf_v = max_magnitude(s.v);
    out.linf_grad_v = std::sqrt(*std::max_element(m1.begin(), m1.end()));
    out.linf_grad2_v = std::sqrt(*std::max_element(m2.begin(), m2.end()));
    out.linf_dtv = jets.v[0].order() >= 1 ? max_magnitude(coefficient(jets.v, 1)) : 0.0;
}

Accum accumulate(const State& s, const FieldHistory& hist, int K) {
    if (K < 0 || K > hist.kappa_max()) throw ConfigError("kappa exceeds the configured kappa_max");
    const SolutionJets& jets = hist.jets();
    const GridPtr& gp = s.grid_ptr();
    const Grid& g = *gp;
    const int dim = g.dim();
    const std::size_t n = g.size();
    const double dV = g.cell_volume();
    const double t = s.t;
    const double tw2 = 1.0 + t * t;
    const double cone_r = std::sqrt(tw2) / 2.0;
    const int hess_levels = std::max(K - 1, 0);
    const bool fluid = dim >= 2;

    Accum acc;
    acc.K = K;
    acc.Ev.assign(static_cast<std::size_t>(K) + 1, 0.0);
    acc.Ed = acc.Ev;
    acc.mod = acc.Ev;
    acc.linf_dZd = acc.Ev;
    acc.X.assign(static_cast<std::size_t>(K), 0.0);
    acc.X_unit = acc.X;
    acc.good_sq.assign(static_cast<std::size_t>(hess_levels) + 1, 0.0);
    acc.hess_sq = acc.good_sq;

    const auto x = coordinates(gp);
    const ScalarField r = radius_field(gp);
    const auto root_gd = director_gradients(s.d);

    auto visit = [&](const ZNode& node) {
        const int m = static_cast<int>(node.ops.size());
        const VectorField zv = coefficient(node.v, 0);
        const VectorField z0 = coefficient(node.d, 0);
        const VectorField z1 = coefficient(node.d, 1);
        const auto gz = director_gradients(z0);

        double energy_v = norm_sq(zv);
        double energy_d = 0.0, corr = 0.0, peak = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            double dens = 0.0;
            for (int c = 0; c < 3; ++c) {
                double local = sq(z1[c][p]);
                for (int j = 0; j < dim; ++j) local += sq(gz[c][j][p]);
                dens += local;
                if (fluid) {
                    double vgz = 0.0, zvgd = 0.0;
                    for (int j = 0; j < dim; ++j) {
                        vgz += s.v[j][p] * gz[c][j][p];
                        zvgd += zv[j][p] * root_gd[c][j][p];
                    }
                    corr += -0.5 * sq(vgz) + zvgd * z1[c][p] + 0.5 * sq(zvgd);
                }
            }
            energy_d += dens;
            peak = std::max(peak, dens);
        }
        energy_d *= dV;
        corr *= dV;
        for (int k = m; k <= K; ++k) {
            acc.Ev[k] += energy_v;
            acc.Ed[k] += energy_d;
            acc.mod[k] += 0.5 * energy_d + corr;
            acc.linf_dZd[k] = std::max(acc.linf_dZd[k], std::sqrt(peak));
        }

        if (m == 0) {
            for (std::size_t p = 0; p < n; ++p) {
                if (r[p] < cone_r) continue;
                acc.cone_points = true;
                for (int c = 0; c < 3; ++c) {
                    double grad2 = 0.0;
                    for (int i = 0; i < dim; ++i) {
                        const double om = x[i][p] / r[p];
                        const double plus = om * z1[c][p] + gz[c][i][p];
                        const double minus = om * z1[c][p] - gz[c][i][p];
                        acc.null_num += sq(plus) * dV;
                        acc.null_fact += plus * minus * dV;
                        grad2 += sq(gz[c][i][p]);
                    }
                    acc.null_den += (sq(z1[c][p]) + grad2) * dV;
                    acc.null_direct += (sq(z1[c][p]) - grad2) * dV;
                }
            }
        }

        if (m > hess_levels || node.d[0].order() < 2) return;
        const VectorField z2 = coefficient(node.d, 2);
        double xw = 0.0, xu = 0.0, good = 0.0, hess = 0.0;
        for (int c = 0; c < 3; ++c) {
            const SpectralField hat0 = forward(z0[c]);
            const SpectralField hat1 = forward(z1[c]);
            std::vector<ScalarField> ht;
            for (int j = 0; j < dim; ++j) ht.push_back(deriv_of(hat1, j));
            std::vector<ScalarField> hs(static_cast<std::size_t>(dim * dim));
            for (int i = 0; i < dim; ++i)
                for (int j = i; j < dim; ++j) {
                    hs[i * dim + j] = deriv2_of(hat0, i, j);
                    if (j != i) hs[j * dim + i] = hs[i * dim + j];
                }
            for (std::size_t p = 0; p < n; ++p) {
                double h2 = sq(z2[c][p]);
                for (int j = 0; j < dim; ++j) h2 += 2.0 * sq(ht[j][p]);
                for (int ij = 0; ij < dim * dim; ++ij) h2 += sq(hs[ij][p]);
                xw += (1.0 + sq(r[p] - t)) * h2;
                xu += h2;
                if (r[p] < cone_r) continue;
                double gt = z2[c][p], gs = 0.0;
                for (int j = 0; j < dim; ++j) gt += x[j][p] / r[p] * ht[j][p];
                for (int i = 0; i < dim; ++i) {
                    double gi = ht[i][p];
                    for (int j = 0; j < dim; ++j) gi += x[j][p] / r[p] * hs[i * dim + j][p];
                    gs += sq(gi);
                }
                good += tw2 * (sq(gt) + gs);
                hess += tw2 * h2;
            }
        }
        for (int k = m; k < K; ++k) {
            acc.X[k] += xw * dV;
            acc.X_unit[k] += xu * dV;
        }
        for (int l = m; l <= hess_levels; ++l) {
            acc.good_sq[l] += good * dV;
            acc.hess_sq[l] += hess * dV;
        }
    };
    walk_z_tree(jets, K, visit);
    root_velocity_profile(s, jets, acc.decay);
    acc.decay.linf_dZd = acc.linf_dZd;
    return acc;
}

bool equivalent_to(double value, double half) {
    if (half <= 0.0) return std::abs(value) <= std::numeric_limits<double>::min();
    return value >= 0.5 * half && value <= 2.0 * half;
}

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

DiagnosticsFrame compute_frame(const State& s, const FieldHistory& hist, double constraint_drift) {
    const Accum acc = accumulate(s, hist, hist.kappa_max());
    DiagnosticsFrame f;
    f.t = s.t;
    f.E_v = acc.Ev;
    f.E_d = acc.Ed;
    f.X_d = acc.X;
    f.linf_v = acc.decay.linf_v;
    f.linf_grad_v = acc.decay.linf_grad_v;
    f.linf_grad2_v = acc.decay.linf_grad2_v;
    f.linf_dtv = acc.decay.linf_dtv;
    f.linf_dZd = acc.linf_dZd;
    for (double g : acc.good_sq) f.good_unknown_norm.push_back(std::sqrt(g));
    for (double h : acc.hess_sq) f.cone_hessian_norm.push_back(std::sqrt(h));
    f.nullform_ratio = std::sqrt(ratio_or_zero(acc.null_num, acc.null_den));
    f.lightcone_empty = !acc.cone_points || acc.null_den <= 0.0;
    f.modified_energy = acc.mod;
    for (int k = 0; k <= acc.K; ++k)
        f.modified_equivalent = f.modified_equivalent && equivalent_to(acc.mod[k], 0.5 * acc.Ed[k]);
    f.div_v_max = s.grid().dim() >= 2 ? max_spectral_divergence(s.v) : 0.0;
    f.constraint_drift = constraint_drift;
    f.boundary_mass = boundary_mass(s, hist.params());
    return f;
}

EnergyPair generalized_energy(const State& s, const FieldHistory& hist, int kappa) {
    const Accum acc = accumulate(s, hist, kappa);
    return {acc.Ev[kappa], acc.Ed[kappa]};
}

double weighted_X_norm(const State& s, const FieldHistory& hist, int kappa, bool unit_weight) {
    if (kappa < 2) throw ConfigError("weighted norm needs kappa >= 2");
    if (kappa - 1 > hist.kappa_max()) throw ConfigError("kappa exceeds the configured kappa_max");
    const Accum acc = accumulate(s, hist, kappa - 1);
    return unit_weight ? acc.X_unit[kappa - 2] : acc.X[kappa - 2];
}

LightconeResult lightcone_diagnostics(const State& s, const FieldHistory& hist, int kappa) {
    if (kappa < 0) throw ConfigError("kappa must be nonnegative");
    const Accum acc = accumulate(s, hist, std::min(kappa + 1, hist.kappa_max()));
    if (kappa > static_cast<int>(acc.good_sq.size()) - 1)
        throw ConfigError("kappa exceeds the levels available from kappa_max");
    LightconeResult out;
    out.good_unknown_norm = std::sqrt(acc.good_sq[kappa]);
    out.nullform_ratio = std::sqrt(ratio_or_zero(acc.null_num, acc.null_den));
    out.region_empty = !acc.cone_points || acc.null_den <= 0.0;
    out.nullform_factorized = acc.null_fact;
    out.nullform_direct = acc.null_direct;
    return out;
}

DecayProfile pointwise_decay_profile(const State& s, const FieldHistory& hist) {
    return accumulate(s, hist, hist.kappa_max()).decay;
}

ModifiedEnergy modified_energy(const State& s, const FieldHistory& hist, int kappa) {
    const Accum acc = accumulate(s, hist, kappa);
    ModifiedEnergy out;
    out.value = acc.mod[kappa];
    out.half_energy = 0.5 * acc.Ed[kappa];
    out.equivalent = equivalent_to(out.value, out.half_energy);
    return out;
}

ModifiedEnergy modified_energy_lower(const State& s, const FieldHistory& hist, int kappa) {
    if (kappa < 0 || kappa > hist.kappa_max()) throw ConfigError("kappa exceeds the configured kappa_max");
    const Grid& g = s.grid();
    const int dim = g.dim();
    const std::size_t n = g.size();
    const int nops = static_cast<int>(vectorfield_ops(dim).size());

    struct Stored {
        VectorField zv;
        std::vector<std::vector<ScalarField>> gz;
        VectorField z1;
    };
    std::map<std::vector<int>, Stored> nodes;
    walk_z_tree(hist.jets(), kappa, [&](const ZNode& node) {
        std::vector<int> counts(static_cast<std::size_t>(nops), 0);
        for (int i : node.ops) ++counts[static_cast<std::size_t>(i)];
        const VectorField z0 = coefficient(node.d, 0);
        nodes[counts] = Stored{coefficient(node.v, 0), director_gradients(z0), coefficient(node.d, 1)};
    });

    ModifiedEnergy out;
    double total = 0.0, energy = 0.0;
    for (const auto& [a, za] : nodes) {
        double e = 0.0;
        for (int c = 0; c < 3; ++c) {
            e += norm_sq(za.z1[c]);
            for (int j = 0; j < dim; ++j) e += norm_sq(za.gz[c][j]);
        }
        energy += e;
        total += 0.5 * e;
        if (dim < 2) continue;
        // Enumerate b <= a componentwise.
        std::vector<int> b(a.size(), 0);
        while (true) {
            double coef = 1.0;
            std::vector<int> cidx(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                cidx[i] = a[i] - b[i];
                double binom = 1.0;
                for (int k = 1; k <= b[i]; ++k) binom = binom * (a[i] - b[i] + k) / k;
                coef *= binom;
            }
            const Stored& zb = nodes.at(b);
            const Stored& zc = nodes.at(cidx);
            double integ = 0.0;
            for (std::size_t p = 0; p < n; ++p)
                for (int c = 0; c < 3; ++c) {
                    double tr = 0.0;
                    for (int j = 0; j < dim; ++j) tr += zb.zv[j][p] * zc.gz[c][j][p];
                    integ += tr * za.z1[c][p];
                }
            total += coef * integ * g.cell_volume();
            std::size_t i = 0;
            while (i < a.size() && b[i] == a[i]) b[i++] = 0;
            if (i == a.size()) break;
            ++b[i];
        }
    }
    out.value = total;
    out.half_energy = 0.5 * energy;
    out.equivalent = equivalent_to(out.value, out.half_energy);
    return out;
}

double boundary_mass(const State& s, const Params& p) {
    const GridPtr& gp = s.grid_ptr();
    const Grid& g = *gp;
    const int dim = g.dim();
    const double edge = g.box_length() / 2.0 - g.box_length() / 16.0;
    const auto gd = director_gradients(s.d);
    double inside = 0.0, total = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double rho = 0.0;
        for (const auto& c : s.v) rho += sq(c[i]);
        for (int c = 0; c < 3; ++c) {
            rho += sq(s.q[c][i]) + sq(s.d[c][i] - p.e[static_cast<std::size_t>(c)]);
            for (int j = 0; j < dim; ++j) rho += sq(gd[c][j][i]);
        }
        total += rho;
        const auto idx = g.unflatten(i);
        bool near = false;
        for (int a = 0; a < dim; ++a) near = near || std::abs(g.coordinate(idx[a])) >= edge;
        if (near) inside += rho;
    }
    return total > 0.0 ? inside / total : 0.0;
}

MonitorReport bootstrap_monitor(const std::vector<DiagnosticsFrame>& series, double epsilon) {
    if (series.size() < 4) throw InsufficientDataError("bootstrap monitor needs at least 4 frames");
    const auto& first = series.front();
    const int K = static_cast<int>(first.E_d.size()) - 1;
    if (K < 0 || first.E_v.empty()) throw ConfigError("frames carry no energies");
    const std::size_t top = static_cast<std::size_t>(K);
    const std::size_t lower = static_cast<std::size_t>(std::max(K - 2, 0));
    MonitorReport rep;
    rep.epsilon = epsilon;
    auto sup_ratio = [&](auto get) {
        const double e0 = get(first);
        double sup = 0.0;
        for (const auto& f : series) sup = std::max(sup, get(f));
        if (e0 > 0.0) return sup / e0;
        return sup > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    };
    rep.sup_Ev_ratio = sup_ratio([&](const DiagnosticsFrame& f) { return f.E_v[top]; });
    rep.sup_Ed_lower_ratio = sup_ratio([&](const DiagnosticsFrame& f) { return f.E_d[lower]; });

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (const auto& f : series) {
        const double e = f.E_d[top];
        if (!(e > 0.0)) continue;
        const double lx = 0.5 * std::log1p(f.t * f.t);
        const double ly = std::log(e);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    const double den = m * sxx - sx * sx;
    rep.growth_exponent = (m >= 2 && den > 0.0) ? (m * sxy - sx * sy) / den : 0.0;

    for (const auto& f : series) {
        if (!f.X_d.empty()) rep.sup_X_over_E = std::max(rep.sup_X_over_E, ratio_or_zero(f.X_d.back(), f.E_d.back()));
        const double e = f.E_d[top];
        if (e > 0.0 && !f.linf_dZd.empty())
            rep.sup_decay_ratio =
                std::max(rep.sup_decay_ratio, std::sqrt(1.0 + f.t * f.t) * f.linf_dZd.front() / std::sqrt(e));
    }
    return rep;
}

double initial_data_norm(const State& s, int kappa) {
    if (kappa < 0) throw ConfigError("kappa must be nonnegative");
    const GridPtr& gp = s.grid_ptr();
    const int dim = gp->dim();
    const auto x = coordinates(gp);
    // Lambda: translations, rotations, then r d_r (index -1).
    std::vector<VectorFieldOp> lam;
    for (const auto& op : vectorfield_ops(dim))
        if (op.kind == OpKind::translation || op.kind == OpKind::rotation) lam.push_back(op);
    const int nl = static_cast<int>(lam.size()) + 1;

    auto apply = [&](const VectorField& f, int i, Target target) {
        if (i == nl - 1) {
            VectorField out;
            for (const auto& c : f) out.push_back(radial(c, x));
            return out;
        }
        return coefficient(apply_vectorfield(constant_jet(f, 0), lam[static_cast<std::size_t>(i)], 0.0, target), 0);
    };
    double total = 0.0;
    std::function<void(const VectorField&, const VectorField&, const VectorField&, int, int)> rec =
        [&](const VectorField& v, const VectorField& d, const VectorField& q, int last, int depth) {
            total += norm_sq(q);
            if (dim >= 2) total += norm_sq(v);
            for (const auto& row : director_gradients(d))
                for (const auto& c : row) total += norm_sq(c);
            if (depth == kappa) return;
            for (int i = 0; i <= last; ++i)
                rec(dim >= 2 ? apply(v, i, Target::velocity) : v, apply(d, i, Target::director),
                    apply(q, i, Target::director), i, depth + 1);
        };
    rec(s.v, s.d, s.q, nl - 1, 0);
    return std::sqrt(total);
}

}  // namespace iel
