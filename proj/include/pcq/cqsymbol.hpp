#pragma once

#include <vector>

#include "pcq/symbols.hpp"
#include "pcq/types.hpp"

namespace pcq {

/// Soft bound constant in |lambda| <= C (p+1)^2 for the spectrum of delta(z),
/// verified empirically up to p = 32; used only to size the fallback contour.
inline constexpr double kSpectralRadiusC = 2.0;

/// Eigenvector condition number beyond which matrix functions switch from
/// diagonalization to the contour-integral fallback.
inline constexpr double kEigCondFallbackThreshold = 1e8;

/// The one-step CQ symbol delta(z) = S - z T(0)^T T(1) with its eigendecomposition.
///
/// The decomposition is computed eagerly so values are immutable and shareable.
struct DeltaMatrix {
    cplx z;
    int p = 0;
    Mat matrix;
    Vec eigenvalues;       ///< unsorted, as returned by the solver
    Mat eigenvectors;
    double eig_condition = 0.0;  ///< condition estimate of the eigenvector matrix
};

DeltaMatrix delta(int p, cplx z);

struct SpectrumResult {
    std::vector<cplx> eigenvalues;  ///< sorted by real part
    double eig_condition = 0.0;
};

SpectrumResult spectrum(const DeltaMatrix& d);

/// Evaluate f(delta(z)/h).
///
/// Diagonalizes delta(z) when the eigenvector conditioning allows it; otherwise
/// falls back to a trapezoidal contour integral over a circle enclosing the
/// region {Re(lambda) >= (1-|z|^2)/(2h), |lambda| <= C (p+1)^2 / h}, doubling
/// the quadrature until two levels agree to 1e-12.
Mat matrix_function(const TransferFunction& f, const DeltaMatrix& d, double h);

/// As matrix_function, but never taking the contour fallback.
Mat matrix_function_diagonalize(const TransferFunction& f, const DeltaMatrix& d, double h);

/// f(A) for a general square matrix via diagonalization (no fallback);
/// used for stage symbols of Runge-Kutta methods.
Mat matrix_function_dense(const TransferFunction& f, const Mat& a);

}  // namespace pcq
