#include "iel/field.hpp"

namespace iel {

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    const double* src = o.data();
    double* dst = data();
    for (std::size_t i = 0, n = size(); i < n; ++i) dst[i] += src[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    const double* src = o.data();
    double* dst = data();
    for (std::size_t i = 0, n = size(); i < n; ++i) dst[i] -= src[i];
    return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& o) {
    const double* src = o.data();
    double* dst = data();
    for (std::size_t i = 0, n = size(); i < n; ++i) dst[i] *= src[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& x : values_) x *= s;
    return *this;
}

ScalarField& ScalarField::operator+=(double s) {
    for (double& x : values_) x += s;
    return *this;
}

ScalarField& ScalarField::axpy(double s, const ScalarField& o) {
    const double* src = o.data();
    double* dst = data();
    for (std::size_t i = 0, n = size(); i < n; ++i) dst[i] += s * src[i];
    return *this;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * o.coeffs_[i];
    return *this;
}

VectorField zero_vector(const GridPtr& grid, int count) {
    std::vector<ScalarField> comps;
    comps.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) comps.emplace_back(grid);
    return VectorField(std::move(comps));
}

}  // namespace iel
