#include "iel/ops.hpp"

#include "iel/errors.hpp"
#include "iel/spectral.hpp"

namespace iel::ops {

namespace {

template <class Fn>
ScalarJet per_coefficient(const ScalarJet& f, Fn fn) {
    std::vector<ScalarField> out;
    for (int k = 0; k <= f.order(); ++k) out.push_back(fn(f[k]));
    return ScalarJet(std::move(out));
}

template <class Fn>
VectorJet per_coefficient_vec(const VectorJet& f, Fn fn) {
    const int order = min_order(f);
    std::vector<VectorField> coeffs;
    for (int k = 0; k <= order; ++k) coeffs.push_back(fn(coefficient(f, k)));
    return make_jet(coeffs);
}

SpectralField masked_forward(const ScalarField& f) {
    SpectralField s = forward(f);
    apply_dealias(s);
    return s;
}

}  // namespace

ScalarField dx(const ScalarField& f, int axis) {
    SpectralField s = masked_forward(f);
    apply_derivative(s, axis, 1);
    return inverse(s);
}

ScalarJet dx(const ScalarJet& f, int axis) {
    return per_coefficient(f, [axis](const ScalarField& c) { return dx(c, axis); });
}

VectorField grad(const ScalarField& f) {
    const SpectralField s = masked_forward(f);
    VectorField out;
    for (int a = 0; a < f.grid().dim(); ++a) {
        SpectralField da = s;
        apply_derivative(da, a, 1);
        out.push_back(inverse(da));
    }
    return out;
}

VectorJet grad(const ScalarJet& f) {
    const int dim = f.value().grid().dim();
    std::vector<std::vector<ScalarField>> comps(static_cast<std::size_t>(dim));
    for (int k = 0; k <= f.order(); ++k) {
        VectorField g = grad(f[k]);
        for (int a = 0; a < dim; ++a) comps[a].push_back(std::move(g[a]));
    }
    VectorJet out;
    for (auto& c : comps) out.push_back(ScalarJet(std::move(c)));
    return out;
}

ScalarField div(const VectorField& row) {
    const GridPtr& g = row[0].grid_ptr();
    SpectralField acc(g);
    for (int a = 0; a < row.size(); ++a) {
        SpectralField s = masked_forward(row[a]);
        apply_derivative(s, a, 1);
        acc += s;
    }
    return inverse(acc);
}

ScalarJet div(const VectorJet& row) {
    const int order = min_order(row);
    std::vector<ScalarField> out;
    for (int k = 0; k <= order; ++k) out.push_back(div(coefficient(row, k)));
    return ScalarJet(std::move(out));
}

ScalarField lap(const ScalarField& f) { return laplacian(f); }

ScalarJet lap(const ScalarJet& f) {
    return per_coefficient(f, [](const ScalarField& c) { return laplacian(c); });
}

ScalarField trunc(const ScalarField& f) { return dealias_truncate(f); }

ScalarJet trunc(const ScalarJet& f) {
    return per_coefficient(f, [](const ScalarField& c) { return dealias_truncate(c); });
}

VectorField project_rhs(const VectorField& nonlinear, const VectorField& v, double mu) {
    const Grid& g = v[0].grid();
    SpectralVector s;
    for (int a = 0; a < v.size(); ++a) {
        SpectralField n = masked_forward(nonlinear[a]);
        if (mu != 0.0) {
            const SpectralField vs = forward(v[a]);
            for (std::size_t idx = 0; idx < n.size(); ++idx) n[idx] -= mu * g.k_squared(idx) * vs[idx];
        }
        s.push_back(std::move(n));
    }
    const SpectralVector p = leray_project(s);
    VectorField out;
    for (const auto& c : p) out.push_back(inverse(c));
    return out;
}

VectorJet project_rhs(const VectorJet& nonlinear, const VectorJet& v, double mu) {
    const int order = std::min(min_order(nonlinear), min_order(v));
    std::vector<VectorField> coeffs;
    for (int k = 0; k <= order; ++k) coeffs.push_back(project_rhs(coefficient(nonlinear, k), coefficient(v, k), mu));
    return make_jet(coeffs);
}

VectorField project(const VectorField& f) {
    SpectralVector s;
    for (const auto& c : f) s.push_back(masked_forward(c));
    const SpectralVector p = leray_project(s);
    VectorField out;
    for (const auto& c : p) out.push_back(inverse(c));
    return out;
}

VectorJet project(const VectorJet& f) {
    return per_coefficient_vec(f, [](const VectorField& c) { return project(c); });
}

}  // namespace iel::ops
