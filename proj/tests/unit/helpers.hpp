#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "iel/dynamics.hpp"
#include "iel/field.hpp"
#include "iel/spectral.hpp"

namespace testutil {

inline iel::ScalarField sample(const iel::GridPtr& g, const std::function<double(double, double, double)>& fn) {
    iel::ScalarField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto idx = g->unflatten(i);
        double x[3] = {0.0, 0.0, 0.0};
        for (int a = 0; a < g->dim(); ++a) x[a] = g->coordinate(idx[a]);
        f[i] = fn(x[0], x[1], x[2]);
    }
    return f;
}

/// Sum of a few random Fourier modes with |m| <= max_mode per axis.
inline iel::ScalarField random_bandlimited(const iel::GridPtr& g, unsigned seed, int max_mode = 3, int terms = 6) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> mode(-max_mode, max_mode);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    const double k0 = 2.0 * M_PI / g->box_length();
    iel::ScalarField f(g);
    for (int t = 0; t < terms; ++t) {
        int m[3] = {0, 0, 0};
        for (int a = 0; a < g->dim(); ++a) m[a] = mode(rng);
        const double ac = amp(rng), as = amp(rng);
        f += sample(g, [&](double x, double y, double z) {
            const double ph = k0 * (m[0] * x + m[1] * y + m[2] * z);
            return ac * std::cos(ph) + as * std::sin(ph);
        });
    }
    return f;
}

inline double max_diff(const iel::ScalarField& a, const iel::ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_diff(const iel::VectorField& a, const iel::VectorField& b) {
    double m = 0.0;
    for (int c = 0; c < a.size(); ++c) m = std::max(m, max_diff(a[c], b[c]));
    return m;
}

inline double max_abs(const iel::VectorField& a) {
    double m = 0.0;
    for (const auto& c : a) m = std::max(m, iel::max_abs(c));
    return m;
}

/// d = (sin u, 0, cos u) with u = eps cos(t) sin(x1), q = d_t d. v = 0.
inline iel::State geodesic_state(const iel::GridPtr& g, double eps, double t) {
    iel::State s = iel::State::equilibrium(g);
    const double c = std::cos(t), sn = std::sin(t);
    s.d[0] = sample(g, [&](double x, double, double) { return std::sin(eps * c * std::sin(x)); });
    s.d[2] = sample(g, [&](double x, double, double) { return std::cos(eps * c * std::sin(x)); });
    s.q[0] = sample(g, [&](double x, double, double) {
        return -eps * sn * std::sin(x) * std::cos(eps * c * std::sin(x));
    });
    s.q[2] = sample(g, [&](double x, double, double) {
        return eps * sn * std::sin(x) * std::sin(eps * c * std::sin(x));
    });
    s.t = t;
    return s;
}

/// Unit director near e3 with tangent q and a divergence-free velocity, all of size amp.
inline iel::State random_admissible(const iel::GridPtr& g, unsigned seed, double amp) {
    iel::State s = iel::State::equilibrium(g);
    iel::DirectorField d, q;
    for (int c = 0; c < 3; ++c) {
        iel::ScalarField pert = random_bandlimited(g, seed + c, 1, 4);
        pert *= amp;
        d.push_back(iel::ScalarField(g, c == 2 ? 1.0 : 0.0) + pert);
        iel::ScalarField qc = random_bandlimited(g, seed + 10 + c, 1, 4);
        qc *= amp;
        q.push_back(qc);
    }
    for (std::size_t i = 0; i < d[0].size(); ++i) {
        const double n = std::sqrt(d[0][i] * d[0][i] + d[1][i] * d[1][i] + d[2][i] * d[2][i]);
        for (int c = 0; c < 3; ++c) d[c][i] /= n;
        const double qd = q[0][i] * d[0][i] + q[1][i] * d[1][i] + q[2][i] * d[2][i];
        for (int c = 0; c < 3; ++c) q[c][i] -= qd * d[c][i];
    }
    s.d = d;
    s.q = q;
    if (g->dim() == 3) {
        iel::VectorField a;
        for (int c = 0; c < 3; ++c) a.push_back(amp * random_bandlimited(g, seed + 20 + c, 2, 4));
        s.v = iel::curl(a);
    } else if (g->dim() == 2) {
        s.v = iel::perp_gradient(amp * random_bandlimited(g, seed + 20, 2, 4));
    }
    return s;
}

}  // namespace testutil
