#pragma once

#include <vector>

#include "iel/ops.hpp"

/// The equations written once over the field type (ScalarField or ScalarJet).
///
/// Gradients are passed as gd[c][j] = d_j f_c. The director always has three
/// components; the velocity has dim components.
namespace iel::rhs {

template <class F>
using Vec = MultiField<F>;

template <class F>
std::vector<Vec<F>> gradients(const Vec<F>& f) {
    std::vector<Vec<F>> out;
    out.reserve(static_cast<std::size_t>(f.size()));
    for (const auto& c : f) out.push_back(ops::grad(c));
    return out;
}

template <class F>
F dot(const Vec<F>& a, const Vec<F>& b) {
    F s = a[0] * b[0];
    for (int j = 1; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

/// (a . grad) f, componentwise.
template <class F>
Vec<F> transport(const Vec<F>& a, const std::vector<Vec<F>>& gf) {
    Vec<F> out;
    for (const auto& g : gf) out.push_back(dot(a, g));
    return out;
}

/// Component i = sum_j d_j (d_i d . d_j d).
template <class F>
Vec<F> stress_div(const std::vector<Vec<F>>& gd) {
    const int dim = gd.front().size();
    std::vector<F> t(static_cast<std::size_t>(dim * dim));
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            F s = gd[0][i] * gd[0][j];
            for (std::size_t c = 1; c < gd.size(); ++c) s += gd[c][i] * gd[c][j];
            t[i * dim + j] = s;
            if (j != i) t[j * dim + i] = s;
        }
    }
    Vec<F> out;
    for (int i = 0; i < dim; ++i) {
        Vec<F> row;
        for (int j = 0; j < dim; ++j) row.push_back(t[i * dim + j]);
        out.push_back(ops::div(row));
    }
    return out;
}

/// |grad d|^2 - sigma0 |w|^2 with w the material derivative of d.
template <class F>
F multiplier(const std::vector<Vec<F>>& gd, const Vec<F>& w, double sigma0) {
    F s = dot(gd[0], gd[0]);
    for (std::size_t c = 1; c < gd.size(); ++c) s += dot(gd[c], gd[c]);
    s.axpy(-sigma0, dot(w, w));
    return s;
}

/// P[-v.grad v + mu lap v - div(grad d (x) grad d)].
template <class F>
Vec<F> momentum(const Vec<F>& v, const std::vector<Vec<F>>& gd, double mu) {
    const Vec<F> adv = transport(v, gradients(v));
    const Vec<F> st = stress_div(gd);
    Vec<F> nl;
    for (int i = 0; i < v.size(); ++i) nl.push_back(-1.0 * (adv[i] + st[i]));
    return ops::project_rhs(nl, v, mu);
}

struct Coefficients {
    double sigma0 = 1.0;
    double sigma1 = 0.0;
    bool has_velocity = true;
};

/// Director right-hand side without the linear term lap(d)/sigma0:
/// (lambda d - sigma1 w)/sigma0 - dv_dt.grad d - v.grad q - v.grad w, truncated.
template <class F>
Vec<F> director_nonlinear(const Vec<F>& v, const Vec<F>& d, const Vec<F>& q, const Vec<F>& dv_dt,
                          const std::vector<Vec<F>>& gd, const Coefficients& c) {
    Vec<F> w = q;
    Vec<F> vgd;
    if (c.has_velocity) {
        vgd = transport(v, gd);
        w += vgd;
    }
    const F lam = multiplier(gd, w, c.sigma0);
    Vec<F> out;
    for (int i = 0; i < d.size(); ++i) {
        F term = lam * d[i];
        if (c.sigma1 != 0.0) term.axpy(-c.sigma1, w[i]);
        out.push_back((1.0 / c.sigma0) * term);
    }
    if (c.has_velocity) {
        Vec<F> qw = q + w;
        const Vec<F> tq = transport(v, gradients(qw));
        const Vec<F> tdv = transport(dv_dt, gd);
        out -= tq;
        out -= tdv;
    }
    Vec<F> cut;
    for (const auto& f : out) cut.push_back(ops::trunc(f));
    return cut;
}

template <class F>
Vec<F> director(const Vec<F>& v, const Vec<F>& d, const Vec<F>& q, const Vec<F>& dv_dt,
                const std::vector<Vec<F>>& gd, const Coefficients& c) {
    Vec<F> out = director_nonlinear(v, d, q, dv_dt, gd, c);
    for (int i = 0; i < d.size(); ++i) out[i].axpy(1.0 / c.sigma0, ops::lap(d[i]));
    return out;
}

}  // namespace iel::rhs
