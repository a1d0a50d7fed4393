#pragma once

#include "iel/field.hpp"

/// Field algebra on the periodic box: transforms, exact Fourier derivatives,
/// Leray projection, 2/3-rule truncation and coordinate fields.
namespace iel {

SpectralField forward(const ScalarField& f);
/// Normalized inverse of `forward`.
ScalarField inverse(const SpectralField& s);

/// Multiplies coefficients by (i k_axis)^order in place. Odd orders zero the Nyquist plane of `axis`.
void apply_derivative(SpectralField& s, int axis, int order);
void apply_dealias(SpectralField& s);

ScalarField spectral_derivative(const ScalarField& f, int axis, int order = 1);
/// One forward transform, dim inverse transforms.
VectorField gradient(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);
ScalarField divergence(const VectorField& v);

/// Modewise f_k - k (k . f_k)/|k|^2; the zero mode passes through. Rejects dim = 1.
VectorField leray_project(const VectorField& f);
/// (Id - P) f, the curl-free part. Rejects dim = 1.
VectorField gradient_part(const VectorField& f);
SpectralVector leray_project(const SpectralVector& f);

ScalarField dealias_truncate(const ScalarField& f);
VectorField dealias_truncate(const VectorField& f);

/// max over grid of |div f| evaluated spectrally.
double max_spectral_divergence(const VectorField& f);
/// Largest |curl|-type antisymmetric residual k_i f_j - k_j f_i, evaluated spectrally.
double max_spectral_curl(const VectorField& f);

/// 3D curl of a 3-component field.
VectorField curl(const VectorField& a);
/// 2D divergence-free field (d_2 psi, -d_1 psi).
VectorField perp_gradient(const ScalarField& psi);

/// x_axis at every node (centered box).
ScalarField coordinate_field(const GridPtr& grid, int axis);
/// r = |x| at every node.
ScalarField radius_field(const GridPtr& grid);

/// Midpoint-rule quadrature over the box (spectrally accurate for periodic integrands).
double integral(const ScalarField& f);
double inner(const ScalarField& a, const ScalarField& b);
double norm_sq(const ScalarField& f);
double norm_sq(const VectorField& f);
double inner(const VectorField& a, const VectorField& b);
/// Integral of f^2 computed from the coefficients (Parseval).
double spectral_norm_sq(const SpectralField& s);
/// Integral of |grad f|^2 computed from the coefficients.
double spectral_gradient_norm_sq(const SpectralField& s);

double max_abs(const ScalarField& f);
/// max over nodes of the Euclidean norm across components.
double max_magnitude(const VectorField& f);
bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& f);

}  // namespace iel
