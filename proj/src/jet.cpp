#include "iel/jet.hpp"

#include <algorithm>

#include "iel/errors.hpp"

namespace iel {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

ScalarJet::ScalarJet(const GridPtr& grid, int order) {
    for (int k = 0; k <= order; ++k) c_.emplace_back(grid);
}

ScalarJet ScalarJet::constant(const ScalarField& f, int order) {
    ScalarJet j(f.grid_ptr(), order);
    j[0] = f;
    return j;
}

void ScalarJet::truncate(int order) {
    if (order < this->order()) c_.resize(static_cast<std::size_t>(order + 1));
}

ScalarJet& ScalarJet::operator+=(const ScalarJet& o) {
    truncate(std::min(order(), o.order()));
    for (int k = 0; k <= order(); ++k) (*this)[k] += o[k];
    return *this;
}

ScalarJet& ScalarJet::operator-=(const ScalarJet& o) {
    truncate(std::min(order(), o.order()));
    for (int k = 0; k <= order(); ++k) (*this)[k] -= o[k];
    return *this;
}

ScalarJet& ScalarJet::operator*=(double s) {
    for (auto& f : c_) f *= s;
    return *this;
}

ScalarJet& ScalarJet::axpy(double s, const ScalarJet& o) {
    truncate(std::min(order(), o.order()));
    for (int k = 0; k <= order(); ++k) (*this)[k].axpy(s, o[k]);
    return *this;
}

ScalarJet operator*(const ScalarJet& a, const ScalarJet& b) {
    const int n = std::min(a.order(), b.order());
    std::vector<ScalarField> out;
    out.reserve(static_cast<std::size_t>(n + 1));
    for (int k = 0; k <= n; ++k) {
        ScalarField acc = a[0] * b[k];
        for (int j = 1; j <= k; ++j) {
            const double c = binomial(k, j);
            const double* pa = a[j].data();
            const double* pb = b[k - j].data();
            double* dst = acc.data();
            for (std::size_t i = 0, m = acc.size(); i < m; ++i) dst[i] += c * pa[i] * pb[i];
        }
        out.push_back(std::move(acc));
    }
    return ScalarJet(std::move(out));
}

ScalarJet operator*(const ScalarField& f, ScalarJet a) {
    for (int k = 0; k <= a.order(); ++k) a[k] *= f;
    return a;
}

ScalarJet time_derivative(const ScalarJet& f) {
    if (f.order() < 1) throw MissingHistoryError("time derivative needs a jet of order >= 1");
    std::vector<ScalarField> out;
    for (int k = 1; k <= f.order(); ++k) out.push_back(f[k]);
    return ScalarJet(std::move(out));
}

VectorJet time_derivative(const VectorJet& f) {
    VectorJet out;
    for (const auto& c : f) out.push_back(time_derivative(c));
    return out;
}

VectorField coefficient(const VectorJet& f, int k) {
    VectorField out;
    for (const auto& c : f) out.push_back(c[k]);
    return out;
}

VectorJet make_jet(const std::vector<VectorField>& coeffs) {
    if (coeffs.empty()) throw ConfigError("jet needs at least one coefficient");
    VectorJet out;
    for (int c = 0; c < coeffs.front().size(); ++c) {
        std::vector<ScalarField> cs;
        for (const auto& v : coeffs) cs.push_back(v[c]);
        out.push_back(ScalarJet(std::move(cs)));
    }
    return out;
}

VectorJet constant_jet(const VectorField& f, int order) {
    VectorJet out;
    for (const auto& c : f) out.push_back(ScalarJet::constant(c, order));
    return out;
}

int min_order(const VectorJet& f) {
    int m = 1 << 20;
    for (const auto& c : f) m = std::min(m, c.order());
    return m;
}

}  // namespace iel
