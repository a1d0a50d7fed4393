#include "iel/verification.hpp"

#include <algorithm>
#include <cmath>

#include "iel/errors.hpp"
#include "iel/rhs.hpp"
#include "iel/spectral.hpp"

namespace iel {

void OracleSpec::validate() const {
    if (kind == OracleKind::geodesic_wavemap && !(std::abs(amplitude) < M_PI / 2.0))
        throw ConfigError("geodesic amplitude must stay below pi/2");
    if (!(mu >= 0.0)) throw ConfigError("oracle viscosity must be nonnegative");
    if (!(sigma0 > 0.0)) throw ConfigError("oracle sigma0 must be positive");
}

State geodesic_state_from(const ScalarField& u0, const ScalarField& u1, double t, double sigma0) {
    const GridPtr& g = u0.grid_ptr();
    const SpectralField a = forward(u0);
    const SpectralField b = forward(u1);
    SpectralField u(g), ut(g);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double w = std::sqrt(g->k_squared(i) / sigma0);
        if (w == 0.0) {
            u[i] = a[i] + t * b[i];
            ut[i] = b[i];
        } else {
            const double c = std::cos(w * t), s = std::sin(w * t);
            u[i] = a[i] * c + b[i] * (s / w);
            ut[i] = -a[i] * (w * s) + b[i] * c;
        }
    }
    const ScalarField uu = inverse(u);
    const ScalarField uv = inverse(ut);
    State st = State::equilibrium(g);
    st.t = t;
    for (std::size_t i = 0; i < uu.size(); ++i) {
        const double c = std::cos(uu[i]), s = std::sin(uu[i]);
        st.d[0][i] = s;
        st.d[2][i] = c;
        st.q[0][i] = uv[i] * c;
        st.q[2][i] = -uv[i] * s;
    }
    return st;
}

namespace {

ScalarField plane_wave(const GridPtr& g, const std::array<int, 3>& m, bool cosine) {
    ScalarField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto idx = g->unflatten(i);
        double ph = 0.0;
        for (int a = 0; a < g->dim(); ++a) ph += m[static_cast<std::size_t>(a)] * g->k0() * g->coordinate(idx[a]);
        f[i] = cosine ? std::cos(ph) : std::sin(ph);
    }
    return f;
}

}  // namespace

State geodesic_oracle(const GridPtr& grid, const OracleSpec& spec, double t) {
    spec.validate();
    const ScalarField u0 = spec.amplitude * plane_wave(grid, spec.mode, false);
    return geodesic_state_from(u0, ScalarField(grid), t, spec.sigma0);
}

State taylor_green_oracle(const GridPtr& grid, const OracleSpec& spec, double t) {
    spec.validate();
    if (grid->dim() < 2) throw DomainError("Taylor-Green flow needs dim >= 2");
    const double k = spec.mode[0] * grid->k0();
    const double a = spec.amplitude * std::exp(-2.0 * spec.mu * k * k * t);
    State s = State::equilibrium(grid);
    s.t = t;
    for (std::size_t i = 0; i < s.v[0].size(); ++i) {
        const auto idx = grid->unflatten(i);
        const double x = k * grid->coordinate(idx[0]), y = k * grid->coordinate(idx[1]);
        s.v[0][i] = a * std::cos(x) * std::sin(y);
        s.v[1][i] = -a * std::sin(x) * std::cos(y);
    }
    return s;
}

VectorField heat_semigroup(const VectorField& v, double mu, double tau) {
    VectorField out;
    for (const auto& c : v) {
        SpectralField s = forward(c);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] *= std::exp(-mu * s.grid().k_squared(i) * tau);
        out.push_back(inverse(s));
    }
    return out;
}

void NonlinearRecord::add(const State& s) {
    if (s.grid().dim() < 2) throw DomainError("Duhamel record needs dim >= 2");
    if (!times.empty() && !(s.t > times.back())) throw ConfigError("record times must increase");
    times.push_back(s.t);
    velocity.push_back(s.v);
    forcing.push_back(rhs::momentum(s.v, rhs::gradients(s.d), 0.0));
}

VectorField duhamel_reconstruct(const NonlinearRecord& record, double t0, double t) {
    auto find = [&](double x) -> std::size_t {
        for (std::size_t i = 0; i < record.times.size(); ++i) {
            const double scale = std::max(1.0, std::abs(x));
            if (std::abs(record.times[i] - x) <= 1e-9 * scale) return i;
        }
        throw InsufficientDataError("no snapshot at the requested time");
    };
    const std::size_t i0 = find(t0), i1 = find(t);
    if (i1 <= i0) throw InsufficientDataError("reconstruction needs t > t0 with snapshots in between");
    const double tend = record.times[i1];
    VectorField out = heat_semigroup(record.velocity[i0], record.mu, tend - record.times[i0]);
    for (std::size_t i = i0; i < i1; ++i) {
        const double h = record.times[i + 1] - record.times[i];
        out.axpy(0.5 * h, heat_semigroup(record.forcing[i], record.mu, tend - record.times[i]));
        out.axpy(0.5 * h, heat_semigroup(record.forcing[i + 1], record.mu, tend - record.times[i + 1]));
    }
    return out;
}

namespace {

struct Commuted {
    VectorField zv;      // Z v
    VectorField dt_zv;   // d_t Z v from the equations
    DirectorField zd;    // Z d
    DirectorField dt_zd; // d_t Z d
};

Commuted commute(const State& s, const Params& p, const VectorFieldOp& op) {
    const SolutionJets j = solution_jets(s, p, 3, 2);
    const VectorJet zd = apply_vectorfield(j.d, op, j.t, Target::director);
    const VectorJet zv = apply_vectorfield(j.v, op, j.t, Target::velocity);
    return {coefficient(zv, 0), coefficient(zv, 1), coefficient(zd, 0), coefficient(zd, 1)};
}

double norm_pair(const VectorField& a, const VectorField& b) { return std::sqrt(norm_sq(a) + norm_sq(b)); }

}  // namespace

ResidualReport commuted_residual(const std::vector<State>& snapshots, const Params& p,
                                 const std::vector<VectorFieldOp>& a) {
    if (a.size() != 1) throw ConfigError("commuted residual supports |a| = 1 only");
    if (snapshots.size() < 3) throw MissingHistoryError("commuted residual needs three consecutive snapshots");
    const VectorFieldOp op = a.front();
    const bool scaling = op.kind == OpKind::scaling;
    const int dim = snapshots.front().grid().dim();
    const bool fluid = dim >= 2;
    const rhs::Coefficients coeff{p.sigma0, p.sigma1, fluid};

    ResidualReport worst;
    for (std::size_t i = 1; i + 1 < snapshots.size(); ++i) {
        const State& prev = snapshots[i - 1];
        const State& mid = snapshots[i];
        const State& next = snapshots[i + 1];
        const double h = mid.t - prev.t;
        if (!(h > 0.0) || std::abs((next.t - mid.t) - h) > 1e-9 * h)
            throw ConfigError("snapshots must be equally spaced in time");
        const Commuted cp = commute(prev, p, op), cm = commute(mid, p, op), cn = commute(next, p, op);

        VectorField zd_tilde = cm.zd, zv_tilde = cm.zv;
        if (scaling) {
            zd_tilde -= mid.d;
            zv_tilde -= mid.v;
        }
        // Director: d_t (d_t Z d) - lap(Z d)/sigma0 = linearized nonlinearity.
        DirectorField lhs_d = (1.0 / (2.0 * h)) * (cn.dt_zd - cp.dt_zd);
        for (int c = 0; c < 3; ++c) lhs_d[c].axpy(-1.0 / p.sigma0, ops::lap(cm.zd[c]));

        const VectorField dv = fluid ? momentum_rhs(mid, p) : zero_vector(mid.grid_ptr(), dim);
        const VectorJet V = make_jet({mid.v, cm.zv});
        const VectorJet D = make_jet({mid.d, cm.zd});
        const VectorJet Q = make_jet({mid.q, cm.dt_zd});
        const VectorJet dV = make_jet({dv, cm.dt_zv});
        DirectorField rhs_d = coefficient(rhs::director_nonlinear(V, D, Q, dV, rhs::gradients(D), coeff), 1);
        if (scaling && p.sigma1 != 0.0) {
            DirectorField w = mid.q;
            if (fluid) w += rhs::transport(mid.v, rhs::gradients(mid.d));
            for (int c = 0; c < 3; ++c) rhs_d[c].axpy(-p.sigma1 / p.sigma0, ops::trunc(w[c]));
        }

        VectorField lhs_v = zero_vector(mid.grid_ptr(), dim), rhs_v = lhs_v;
        if (fluid) {
            lhs_v = (1.0 / (2.0 * h)) * (cn.zv - cp.zv);
            for (int k = 0; k < dim; ++k) lhs_v[k].axpy(-p.mu, ops::lap(zv_tilde[k]));
            const VectorJet Dt = make_jet({mid.d, zd_tilde});
            const VectorJet adv = rhs::transport(V, rhs::gradients(V));
            const VectorJet st = rhs::stress_div(rhs::gradients(Dt));
            VectorJet nl;
            for (int k = 0; k < dim; ++k) nl.push_back(-1.0 * (adv[k] + st[k]));
            rhs_v = coefficient(ops::project_rhs(nl, V, 0.0), 1);
        }

        const double abs = norm_pair(lhs_v - rhs_v, lhs_d - rhs_d);
        const double base = norm_pair(dv, director_rhs(mid, p, dv));
        const double denom = std::max({norm_pair(lhs_v, lhs_d), norm_pair(rhs_v, rhs_d), base});
        const double rel = denom > 0.0 ? abs / denom : 0.0;
        if (rel > worst.relative || (rel == worst.relative && abs > worst.absolute)) worst = {abs, rel};
    }
    return worst;
}

namespace {

double sq(double x) { return x * x; }

double l2(const ScalarField& f) { return std::sqrt(norm_sq(f)); }

double l2(const VectorField& f) { return std::sqrt(norm_sq(f)); }

double weighted_l2(const VectorField& f, const ScalarField& w) {
    double s = 0.0;
    for (const auto& c : f)
        for (std::size_t i = 0; i < c.size(); ++i) s += sq(w[i] * c[i]);
    return std::sqrt(s * f[0].grid().cell_volume());
}

ScalarField rotation(const ScalarField& u, int axis, const std::vector<ScalarField>& x) {
    const int a = (axis + 1) % 3, b = (axis + 2) % 3;
    return x[static_cast<std::size_t>(a)] * spectral_derivative(u, b) -
           x[static_cast<std::size_t>(b)] * spectral_derivative(u, a);
}

ScalarField radial_derivative(const ScalarField& u, const std::vector<ScalarField>& x, const ScalarField& r) {
    const VectorField g = gradient(u);
    ScalarField out(u.grid_ptr());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (r[i] == 0.0) continue;
        double s = 0.0;
        for (int a = 0; a < 3; ++a) s += x[static_cast<std::size_t>(a)][i] * g[a][i];
        out[i] = s / r[i];
    }
    return out;
}

VectorField hessian(const ScalarField& u) {
    VectorField out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.push_back(spectral_derivative(spectral_derivative(u, i), j));
    return out;
}

}  // namespace

ProbeReport sobolev_probe(const std::vector<ScalarField>& family, const std::vector<double>& times) {
    ProbeReport rep;
    for (const auto& u : family) {
        const GridPtr& g = u.grid_ptr();
        if (g->dim() != 3) throw DomainError("weighted Sobolev probes are three-dimensional");
        std::vector<ScalarField> x;
        for (int a = 0; a < 3; ++a) x.push_back(coordinate_field(g, a));
        const ScalarField r = radius_field(g);
        const double dV = g->cell_volume();

        std::vector<ScalarField> om1, om2;
        for (int i = 0; i < 3; ++i) om1.push_back(rotation(u, i, x));
        for (const auto& w : om1)
            for (int j = 0; j < 3; ++j) om2.push_back(rotation(w, j, x));
        const VectorField gu = gradient(u);
        const VectorField hu = hessian(u);
        const double nu = l2(u);

        double grad_om = l2(gu), dr_om = l2(radial_derivative(u, x, r)), om_sum = nu;
        for (const auto& w : om1) {
            grad_om += l2(gradient(w));
            dr_om += l2(radial_derivative(w, x, r));
            om_sum += l2(w);
        }
        for (const auto& w : om2) om_sum += l2(w);

        for (double t : times) {
            const double tw = std::sqrt(1.0 + t * t);
            ScalarField wt(g);
            for (std::size_t i = 0; i < wt.size(); ++i) wt[i] = std::sqrt(1.0 + sq(t - r[i]));
            double sup_r12 = 0.0, sup_r = 0.0, sup_in = 0.0, l6 = 0.0, l3 = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double au = std::abs(u[i]);
                const double rw = std::sqrt(1.0 + sq(r[i]));
                sup_r12 = std::max(sup_r12, std::sqrt(rw) * au);
                sup_r = std::max(sup_r, rw * au);
                if (r[i] <= tw / 2.0) {
                    sup_in = std::max(sup_in, au);
                    l6 += std::pow(au, 6.0);
                    l3 += au * au * au;
                }
            }
            l6 = std::pow(l6 * dV, 1.0 / 6.0);
            l3 = std::cbrt(l3 * dV);
            const double wg = weighted_l2(gu, wt), wh = weighted_l2(hu, wt);
            const std::array<double, ProbeReport::count> lhs{sup_r12, sup_r, tw * sup_in, tw * l6, std::sqrt(tw) * l3};
            const std::array<double, ProbeReport::count> rhs{grad_om, std::sqrt(dr_om) * std::sqrt(om_sum),
                                                             nu + wg + wh, nu + wg, std::sqrt(nu) * std::sqrt(wg + nu)};
            for (int k = 0; k < ProbeReport::count; ++k) {
                if (rhs[k] <= 0.0) {
                    if (lhs[k] > 0.0) throw ProbeFailure("inequality violated: right side vanishes");
                    ++rep.skipped[k];
                    continue;
                }
                rep.max_ratio[k] = std::max(rep.max_ratio[k], lhs[k] / rhs[k]);
            }
        }
    }
    return rep;
}

namespace {

/// Periodic centred differences on the raw node array.
class FiniteDiff {
public:
    explicit FiniteDiff(const Grid& g) : g_(g), h_(g.spacing()) {
        std::size_t s = 1;
        stride_.assign(3, 0);
        for (int a = g.dim() - 1; a >= 0; --a) {
            stride_[a] = s;
            s *= static_cast<std::size_t>(g.n());
        }
    }

    std::size_t neighbour(std::size_t i, int axis, int step) const {
        const auto idx = g_.unflatten(i);
        const int n = g_.n();
        const int j = ((idx[axis] + step) % n + n) % n;
        return i + (static_cast<std::ptrdiff_t>(j) - idx[axis]) * static_cast<std::ptrdiff_t>(stride_[axis]);
    }

    ScalarField d(const ScalarField& f, int axis) const {
        ScalarField out(f.grid_ptr());
        for (std::size_t i = 0; i < f.size(); ++i)
            out[i] = (f[neighbour(i, axis, 1)] - f[neighbour(i, axis, -1)]) / (2.0 * h_);
        return out;
    }

    ScalarField lap(const ScalarField& f) const {
        ScalarField out(f.grid_ptr());
        for (std::size_t i = 0; i < f.size(); ++i) {
            double s = 0.0;
            for (int a = 0; a < g_.dim(); ++a)
                s += f[neighbour(i, a, 1)] - 2.0 * f[i] + f[neighbour(i, a, -1)];
            out[i] = s / (h_ * h_);
        }
        return out;
    }

    /// Zero-mean solution of lap(phi) = rhs by conjugate gradients on -lap.
    ScalarField poisson(ScalarField rhs) const {
        double mean = 0.0;
        for (std::size_t i = 0; i < rhs.size(); ++i) mean += rhs[i];
        rhs += -mean / static_cast<double>(rhs.size());
        ScalarField x(rhs.grid_ptr());
        ScalarField res = -1.0 * rhs;
        ScalarField dir = res;
        auto dot = [](const ScalarField& a, const ScalarField& b) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
            return s;
        };
        double rr = dot(res, res);
        const double stop = 1e-28 * std::max(rr, 1e-300);
        for (int it = 0; it < 10 * static_cast<int>(rhs.size()) && rr > stop; ++it) {
            const ScalarField ad = -1.0 * lap(dir);
            const double alpha = rr / dot(dir, ad);
            x.axpy(alpha, dir);
            res.axpy(-alpha, ad);
            const double rn = dot(res, res);
            ScalarField next = res;
            next.axpy(rn / rr, dir);
            dir = std::move(next);
            rr = rn;
        }
        return x;
    }

private:
    const Grid& g_;
    double h_;
    std::vector<std::size_t> stride_;
};

}  // namespace

State fd_reference_step(const State& s, const Params& p, double dt) {
    const Grid& g = s.grid();
    const int dim = g.dim();
    const bool fluid = dim >= 2;
    const FiniteDiff fd(g);
    const std::size_t n = g.size();

    std::vector<VectorField> gd;
    for (int c = 0; c < 3; ++c) {
        VectorField row;
        for (int a = 0; a < dim; ++a) row.push_back(fd.d(s.d[c], a));
        gd.push_back(std::move(row));
    }

    VectorField dv = zero_vector(s.grid_ptr(), dim);
    if (fluid) {
        VectorField force = zero_vector(s.grid_ptr(), dim);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                force[i] -= s.v[j] * fd.d(s.v[i], j);
                ScalarField tij(s.grid_ptr());
                for (int c = 0; c < 3; ++c) tij += gd[c][i] * gd[c][j];
                force[i] -= fd.d(tij, j);
            }
        }
        ScalarField divf(s.grid_ptr());
        for (int i = 0; i < dim; ++i) divf += fd.d(force[i], i);
        const ScalarField phi = fd.poisson(divf);
        for (int i = 0; i < dim; ++i) {
            dv[i] = force[i] - fd.d(phi, i);
            dv[i].axpy(p.mu, fd.lap(s.v[i]));
        }
    }

    DirectorField w = s.q;
    if (fluid)
        for (int c = 0; c < 3; ++c)
            for (int j = 0; j < dim; ++j) w[c] += s.v[j] * gd[c][j];
    ScalarField lambda(s.grid_ptr());
    for (std::size_t i = 0; i < n; ++i) {
        double l = 0.0;
        for (int c = 0; c < 3; ++c) {
            for (int j = 0; j < dim; ++j) l += sq(gd[c][j][i]);
            l -= p.sigma0 * sq(w[c][i]);
        }
        lambda[i] = l;
    }
    DirectorField dq;
    for (int c = 0; c < 3; ++c) {
        ScalarField a = fd.lap(s.d[c]) + lambda * s.d[c];
        a.axpy(-p.sigma1, w[c]);
        a *= 1.0 / p.sigma0;
        if (fluid) {
            const ScalarField qw = s.q[c] + w[c];
            for (int j = 0; j < dim; ++j) {
                a -= dv[j] * gd[c][j];
                a -= s.v[j] * fd.d(qw, j);
            }
        }
        dq.push_back(std::move(a));
    }

    State out = s;
    out.t = s.t + dt;
    for (int c = 0; c < 3; ++c) {
        out.d[c].axpy(dt, s.q[c]);
        out.q[c].axpy(dt, dq[c]);
    }
    if (fluid)
        for (int i = 0; i < dim; ++i) out.v[i].axpy(dt, dv[i]);
    return out;
}

}  // namespace iel
