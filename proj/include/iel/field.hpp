#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "iel/grid.hpp"

namespace iel {

/// Real samples of a scalar on the grid nodes.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(GridPtr grid, double value = 0.0)
        : grid_(std::move(grid)), values_(grid_->size(), value) {}

    const GridPtr& grid_ptr() const { return grid_; }
    const Grid& grid() const { return *grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    /// Pointwise product.
    ScalarField& operator*=(const ScalarField& o);
    ScalarField& operator*=(double s);
    ScalarField& operator+=(double s);
    /// this += s * o
    ScalarField& axpy(double s, const ScalarField& o);

    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
    friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
    friend ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
    friend ScalarField operator*(double s, ScalarField a) { return a *= s; }
    friend ScalarField operator*(ScalarField a, double s) { return a *= s; }
    ScalarField operator-() const { return (*this) * -1.0; }

private:
    GridPtr grid_;
    RealBuffer values_;
};

/// Spectral coefficients (FFTW r2c layout, unnormalized forward transform).
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(GridPtr grid) : grid_(std::move(grid)), coeffs_(grid_->spectral_size()) {}

    const GridPtr& grid_ptr() const { return grid_; }
    const Grid& grid() const { return *grid_; }
    std::size_t size() const { return coeffs_.size(); }
    Complex* data() { return coeffs_.data(); }
    const Complex* data() const { return coeffs_.data(); }
    Complex& operator[](std::size_t i) { return coeffs_[i]; }
    const Complex& operator[](std::size_t i) const { return coeffs_[i]; }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    SpectralField& axpy(double s, const SpectralField& o);

private:
    GridPtr grid_;
    ComplexBuffer coeffs_;
};

/// A fixed number of components of the same field kind.
///
/// VectorField (dim components) and DirectorField (always 3 components) are
/// both MultiField<ScalarField>; jets of them are MultiField<ScalarJet>.
template <class F>
class MultiField {
public:
    MultiField() = default;
    explicit MultiField(std::vector<F> comps) : comps_(std::move(comps)) {}
    MultiField(std::initializer_list<F> comps) : comps_(comps) {}

    int size() const { return static_cast<int>(comps_.size()); }
    F& operator[](int i) { return comps_[static_cast<std::size_t>(i)]; }
    const F& operator[](int i) const { return comps_[static_cast<std::size_t>(i)]; }
    auto begin() { return comps_.begin(); }
    auto end() { return comps_.end(); }
    auto begin() const { return comps_.begin(); }
    auto end() const { return comps_.end(); }
    void push_back(F f) { comps_.push_back(std::move(f)); }

    MultiField& operator+=(const MultiField& o) {
        for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
        return *this;
    }
    MultiField& operator-=(const MultiField& o) {
        for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= o.comps_[i];
        return *this;
    }
    MultiField& operator*=(double s) {
        for (auto& c : comps_) c *= s;
        return *this;
    }
    MultiField& axpy(double s, const MultiField& o) {
        for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i].axpy(s, o.comps_[i]);
        return *this;
    }
    friend MultiField operator+(MultiField a, const MultiField& b) { return a += b; }
    friend MultiField operator-(MultiField a, const MultiField& b) { return a -= b; }
    friend MultiField operator*(double s, MultiField a) { return a *= s; }

private:
    std::vector<F> comps_;
};

using VectorField = MultiField<ScalarField>;
/// Three components regardless of the spatial dimension.
using DirectorField = MultiField<ScalarField>;
using SpectralVector = MultiField<SpectralField>;

/// `count` zero components on `grid`.
VectorField zero_vector(const GridPtr& grid, int count);

}  // namespace iel
