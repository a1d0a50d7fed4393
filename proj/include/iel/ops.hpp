#pragma once

#include "iel/field.hpp"
#include "iel/jet.hpp"

/// Operators used inside right-hand-side assembly. Unlike the plain spectral
/// routines, everything that passes through spectral space here is also cut
/// to the dealias mask. Each operator has a field and a jet overload so the
/// equations can be written once as templates.
namespace iel::ops {

ScalarField dx(const ScalarField& f, int axis);
ScalarJet dx(const ScalarJet& f, int axis);

/// Masked gradient (dim components).
VectorField grad(const ScalarField& f);
VectorJet grad(const ScalarJet& f);

/// Masked sum_j d_j row_j.
ScalarField div(const VectorField& row);
ScalarJet div(const VectorJet& row);

/// Exact (unmasked) Laplacian.
ScalarField lap(const ScalarField& f);
ScalarJet lap(const ScalarJet& f);

ScalarField trunc(const ScalarField& f);
ScalarJet trunc(const ScalarJet& f);

/// Leray projection of (masked nonlinear + mu * Laplacian of v).
VectorField project_rhs(const VectorField& nonlinear, const VectorField& v, double mu);
VectorJet project_rhs(const VectorJet& nonlinear, const VectorJet& v, double mu);

/// Masked Leray projection.
VectorField project(const VectorField& f);
VectorJet project(const VectorJet& f);

}  // namespace iel::ops
