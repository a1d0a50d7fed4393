#include "iel/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "iel/errors.hpp"

namespace iel {

namespace {

// Wavenumber used by odd-order operators: the Nyquist plane of an axis has no
// real-valued first derivative, so it is treated as k = 0 there.
double odd_wavenumber(const Grid& g, std::size_t idx, int axis) {
    return g.is_nyquist(idx, axis) ? 0.0 : g.wavenumber(idx, axis);
}

void check_axis(const Grid& g, int axis) {
    if (axis < 0 || axis >= g.dim()) throw ConfigError("axis out of range for grid dimension");
}

}  // namespace

SpectralField forward(const ScalarField& f) {
    SpectralField s(f.grid_ptr());
    f.grid().forward(f.data(), s.data());
    return s;
}

ScalarField inverse(const SpectralField& s) {
    ScalarField f(s.grid_ptr());
    s.grid().inverse(s.data(), f.data());
    f *= 1.0 / static_cast<double>(f.size());
    return f;
}

void apply_derivative(SpectralField& s, int axis, int order) {
    const Grid& g = s.grid();
    check_axis(g, axis);
    if (order < 1) throw ConfigError("derivative order must be >= 1");
    const bool odd = order % 2 == 1;
    for (std::size_t idx = 0; idx < s.size(); ++idx) {
        if (odd && g.is_nyquist(idx, axis)) {
            s[idx] = 0.0;
            continue;
        }
        const Complex ik(0.0, g.wavenumber(idx, axis));
        Complex factor = 1.0;
        for (int p = 0; p < order; ++p) factor *= ik;
        s[idx] *= factor;
    }
}

void apply_dealias(SpectralField& s) {
    const Grid& g = s.grid();
    for (std::size_t idx = 0; idx < s.size(); ++idx)
        if (!g.dealias_keep(idx)) s[idx] = 0.0;
}

ScalarField spectral_derivative(const ScalarField& f, int axis, int order) {
    check_axis(f.grid(), axis);
    SpectralField s = forward(f);
    apply_derivative(s, axis, order);
    return inverse(s);
}

VectorField gradient(const ScalarField& f) {
    const SpectralField s = forward(f);
    std::vector<ScalarField> out;
    for (int a = 0; a < f.grid().dim(); ++a) {
        SpectralField da = s;
        apply_derivative(da, a, 1);
        out.push_back(inverse(da));
    }
    return VectorField(std::move(out));
}

ScalarField laplacian(const ScalarField& f) {
    SpectralField s = forward(f);
    const Grid& g = f.grid();
    for (std::size_t idx = 0; idx < s.size(); ++idx) s[idx] *= -g.k_squared(idx);
    return inverse(s);
}

ScalarField divergence(const VectorField& v) {
    const GridPtr& gp = v[0].grid_ptr();
    SpectralField acc(gp);
    for (int a = 0; a < gp->dim(); ++a) {
        SpectralField s = forward(v[a]);
        apply_derivative(s, a, 1);
        acc += s;
    }
    return inverse(acc);
}

SpectralVector leray_project(const SpectralVector& f) {
    const Grid& g = f[0].grid();
    const int dim = g.dim();
    if (dim < 2) throw DomainError("Leray projection is degenerate in one dimension");
    if (f.size() != dim) throw ConfigError("Leray projection needs dim components");
    SpectralVector out = f;
    for (std::size_t idx = 0; idx < g.spectral_size(); ++idx) {
        double k[3] = {0.0, 0.0, 0.0};
        double ksq = 0.0;
        for (int a = 0; a < dim; ++a) {
            k[a] = odd_wavenumber(g, idx, a);
            ksq += k[a] * k[a];
        }
        if (ksq == 0.0) continue;
        Complex kdotf = 0.0;
        for (int a = 0; a < dim; ++a) kdotf += k[a] * f[a][idx];
        for (int a = 0; a < dim; ++a) out[a][idx] -= k[a] * kdotf / ksq;
    }
    return out;
}

VectorField leray_project(const VectorField& f) {
    if (f[0].grid().dim() < 2) throw DomainError("Leray projection is degenerate in one dimension");
    SpectralVector s;
    for (const auto& c : f) s.push_back(forward(c));
    SpectralVector p = leray_project(s);
    VectorField out;
    for (const auto& c : p) out.push_back(inverse(c));
    return out;
}

VectorField gradient_part(const VectorField& f) {
    VectorField p = leray_project(f);
    VectorField out = f;
    out -= p;
    return out;
}

ScalarField dealias_truncate(const ScalarField& f) {
    SpectralField s = forward(f);
    apply_dealias(s);
    return inverse(s);
}

VectorField dealias_truncate(const VectorField& f) {
    VectorField out;
    for (const auto& c : f) out.push_back(dealias_truncate(c));
    return out;
}

double max_spectral_divergence(const VectorField& f) {
    return max_abs(divergence(f));
}

double max_spectral_curl(const VectorField& f) {
    const Grid& g = f[0].grid();
    const int dim = g.dim();
    std::vector<SpectralField> s;
    for (int a = 0; a < dim; ++a) s.push_back(forward(f[a]));
    double worst = 0.0;
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            SpectralField c(f[0].grid_ptr());
            for (std::size_t idx = 0; idx < g.spectral_size(); ++idx) {
                const double ki = odd_wavenumber(g, idx, i);
                const double kj = odd_wavenumber(g, idx, j);
                c[idx] = Complex(0.0, 1.0) * (ki * s[j][idx] - kj * s[i][idx]);
            }
            worst = std::max(worst, max_abs(inverse(c)));
        }
    }
    return worst;
}

VectorField curl(const VectorField& a) {
    const Grid& g = a[0].grid();
    if (g.dim() != 3 || a.size() != 3) throw DomainError("curl needs a 3-component field in 3D");
    auto d = [&](int comp, int axis) { return spectral_derivative(a[comp], axis, 1); };
    VectorField out;
    out.push_back(d(2, 1) - d(1, 2));
    out.push_back(d(0, 2) - d(2, 0));
    out.push_back(d(1, 0) - d(0, 1));
    return out;
}

VectorField perp_gradient(const ScalarField& psi) {
    if (psi.grid().dim() != 2) throw DomainError("perp_gradient is two dimensional");
    VectorField out;
    out.push_back(spectral_derivative(psi, 1, 1));
    out.push_back(-spectral_derivative(psi, 0, 1));
    return out;
}

ScalarField coordinate_field(const GridPtr& grid, int axis) {
    check_axis(*grid, axis);
    ScalarField x(grid);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = grid->coordinate(grid->unflatten(i)[axis]);
    return x;
}

ScalarField radius_field(const GridPtr& grid) {
    ScalarField r(grid);
    for (std::size_t i = 0; i < r.size(); ++i) {
        const auto idx = grid->unflatten(i);
        double s = 0.0;
        for (int a = 0; a < grid->dim(); ++a) {
            const double x = grid->coordinate(idx[a]);
            s += x * x;
        }
        r[i] = std::sqrt(s);
    }
    return r;
}

double integral(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.values()) s += x;
    return s * f.grid().cell_volume();
}

double inner(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    const double* pa = a.data();
    const double* pb = b.data();
    for (std::size_t i = 0, n = a.size(); i < n; ++i) s += pa[i] * pb[i];
    return s * a.grid().cell_volume();
}

double norm_sq(const ScalarField& f) { return inner(f, f); }

double norm_sq(const VectorField& f) {
    double s = 0.0;
    for (const auto& c : f) s += norm_sq(c);
    return s;
}

double inner(const VectorField& a, const VectorField& b) {
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) s += inner(a[i], b[i]);
    return s;
}

double spectral_norm_sq(const SpectralField& s) {
    const Grid& g = s.grid();
    double acc = 0.0;
    for (std::size_t idx = 0; idx < s.size(); ++idx) acc += g.hermitian_weight(idx) * std::norm(s[idx]);
    const double n = static_cast<double>(g.size());
    return acc * std::pow(g.box_length(), g.dim()) / (n * n);
}

double spectral_gradient_norm_sq(const SpectralField& s) {
    const Grid& g = s.grid();
    double acc = 0.0;
    for (std::size_t idx = 0; idx < s.size(); ++idx) {
        double ksq = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double k = odd_wavenumber(g, idx, a);
            ksq += k * k;
        }
        acc += g.hermitian_weight(idx) * ksq * std::norm(s[idx]);
    }
    const double n = static_cast<double>(g.size());
    return acc * std::pow(g.box_length(), g.dim()) / (n * n);
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double x : f.values()) m = std::max(m, std::abs(x));
    return m;
}

double max_magnitude(const VectorField& f) {
    const std::size_t n = f[0].size();
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (const auto& c : f) s += c[i] * c[i];
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

bool all_finite(const ScalarField& f) {
    for (double x : f.values())
        if (!std::isfinite(x)) return false;
    return true;
}

bool all_finite(const VectorField& f) {
    for (const auto& c : f)
        if (!all_finite(c)) return false;
    return true;
}

}  // namespace iel
