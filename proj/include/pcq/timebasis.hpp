#pragma once

#include <functional>

#include "pcq/types.hpp"

namespace pcq {

/// Values of the normalized shifted-Legendre basis phi_0..phi_p at tau in [0,1],
/// phi_j(tau) = sqrt(2j+1) * L_j(2 tau - 1).
RealVec basis_eval(int p, double tau);

/// Derivatives phi_0'..phi_p' at tau in [0,1].
RealVec basis_deriv_eval(int p, double tau);

/// The one-step DG matrices in the normalized shifted-Legendre basis.
///
/// mass is the identity; stiffness(i,j) = int_0^1 phi_j' phi_i + phi_j(0) phi_i(0),
/// assembled from the closed form; trace0/trace1 are the basis values at 0 and 1.
struct DgMatrices {
    RealMat mass;
    RealMat stiffness;
    RealVec trace0;
    RealVec trace1;
};

DgMatrices dg_matrices(int p);

/// A time signal: one coefficient vector per step w.r.t. phi_0..phi_p.
///
/// Values are left-continuous at the nodes. Treat as immutable after construction.
struct PiecewisePolynomial {
    TimeGrid grid;
    Mat coeffs;  ///< (p+1) x N

    PiecewisePolynomial() = default;
    PiecewisePolynomial(const TimeGrid& grid, Mat coeffs);

    static PiecewisePolynomial zero(const TimeGrid& grid);

    /// Value at t in (0, N*h]; interior nodes give the left limit.
    cplx eval(double t) const;

    /// Left-limit value at node t_n, n = 1..N.
    cplx node_value(int n) const;

    double max_abs(int samples = 1024) const;
};

using TimeFunction = std::function<cplx(double)>;

/// Per-element projection matching the right endpoint value and L2-orthogonal
/// to degree p-1 (degenerates to right-endpoint interpolation at p = 0).
PiecewisePolynomial interpolate(const TimeFunction& g, const TimeGrid& grid);

/// Element-wise L2 orthogonal projection onto degree p.
PiecewisePolynomial l2_project(const TimeFunction& g, const TimeGrid& grid);

/// Exact running integral int_0^t u, for 0 <= t <= T, evaluated through the
/// Legendre antiderivative identities (no quadrature).
cplx integral_value(const PiecewisePolynomial& u, double t);

}  // namespace pcq
