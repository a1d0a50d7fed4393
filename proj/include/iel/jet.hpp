#pragma once

#include <cstddef>
#include <vector>

#include "iel/field.hpp"

namespace iel {

/// Truncated time jet of a scalar field: coefficient k holds the k-th time derivative.
///
/// Products follow the Leibniz rule and are truncated to the shorter operand.
/// Spatial linear operators act coefficient by coefficient.
class ScalarJet {
public:
    ScalarJet() = default;
    explicit ScalarJet(std::vector<ScalarField> coeffs) : c_(std::move(coeffs)) {}
    /// Jet of the given order with all coefficients zero.
    ScalarJet(const GridPtr& grid, int order);
    /// Time-independent field: value f, higher derivatives zero.
    static ScalarJet constant(const ScalarField& f, int order);

    int order() const { return static_cast<int>(c_.size()) - 1; }
    ScalarField& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
    const ScalarField& operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
    const ScalarField& value() const { return c_.front(); }
    const GridPtr& grid_ptr() const { return c_.front().grid_ptr(); }
    void push_back(ScalarField f) { c_.push_back(std::move(f)); }
    /// Drops coefficients above `order`.
    void truncate(int order);

    ScalarJet& operator+=(const ScalarJet& o);
    ScalarJet& operator-=(const ScalarJet& o);
    ScalarJet& operator*=(double s);
    ScalarJet& axpy(double s, const ScalarJet& o);

    friend ScalarJet operator+(ScalarJet a, const ScalarJet& b) { return a += b; }
    friend ScalarJet operator-(ScalarJet a, const ScalarJet& b) { return a -= b; }
    friend ScalarJet operator*(double s, ScalarJet a) { return a *= s; }
    friend ScalarJet operator*(ScalarJet a, double s) { return a *= s; }
    /// Leibniz product.
    friend ScalarJet operator*(const ScalarJet& a, const ScalarJet& b);
    /// Product with a time-independent field.
    friend ScalarJet operator*(const ScalarField& f, ScalarJet a);
    ScalarJet operator-() const { return (*this) * -1.0; }

private:
    std::vector<ScalarField> c_;
};

using VectorJet = MultiField<ScalarJet>;

/// d/dt: shifts coefficients down by one (order decreases by one).
ScalarJet time_derivative(const ScalarJet& f);
VectorJet time_derivative(const VectorJet& f);

/// Coefficient k of every component.
VectorField coefficient(const VectorJet& f, int k);
/// Builds a jet from per-order vector fields: out[c][k] = coeffs[k][c].
VectorJet make_jet(const std::vector<VectorField>& coeffs);
VectorJet constant_jet(const VectorField& f, int order);
int min_order(const VectorJet& f);

}  // namespace iel
