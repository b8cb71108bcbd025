#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pcq/cqengine.hpp"
#include "pcq/symbols.hpp"
#include "pcq/timebasis.hpp"
#include "pcq/types.hpp"

namespace pcq {

using VectorTimeFunction = std::function<Vec(double)>;

/// y' = A y + f with zero initial data; A must be finite, and skew-Hermitian
/// for the stability probe.
struct LinearSystem {
    Mat a;
    VectorTimeFunction forcing;
    std::string label;
};

enum class ForcingProjection {
    Interpolation,  ///< right-endpoint + orthogonality projection (CQ-compatible)
    L2,             ///< plain L2 projection (the <f, v> right-hand side)
};

/// DG timestepping for y' = zeta y + g, zero initial condition:
/// (S - h zeta M) Y^n = T(0)^T T(1) Y^{n-1} + h G^n with Y^{-1} = 0.
PiecewisePolynomial ode_solve(cplx zeta, const TimeFunction& g, const TimeGrid& grid,
                              ForcingProjection proj = ForcingProjection::Interpolation);

/// System version; solves the per-step Sylvester problem through the
/// eigenbasis of A^T, falling back to the dense Kronecker system when that
/// basis is ill-conditioned.  Returns one signal per state component.
std::vector<PiecewisePolynomial> ode_solve(const LinearSystem& sys, const TimeGrid& grid,
                                           ForcingProjection proj = ForcingProjection::Interpolation);

/// Stiffly accurate RadauIIa collocation tableau (right-sided Radau nodes),
/// generated from the order conditions rather than hard-coded.
struct RadauTableau {
    int stages = 0;
    RealVec c;
    RealMat a;
    RealVec b;  ///< equals the last row of a
};

RadauTableau radau_tableau(int stages = 3);

/// Stage values u(t_n + c_i h), one column per step.
struct RadauStageSignal {
    TimeGrid grid;   ///< grid.p is the stage polynomial degree (stages - 1)
    Mat values;      ///< (stages) x N
};

struct RadauWeights {
    TimeGrid grid;
    double radius = 0.0;
    std::vector<Mat> weights;  ///< N+1 stage-space matrices
};

/// Weights of K(Delta(z)/h) with the Runge-Kutta symbol
/// Delta(z) = (A + z/(1-z) 1 b^T)^{-1}, sampled on the standard circle.
RadauWeights radau_cq_weights(const TransferFunction& K, const TimeGrid& grid,
                              std::optional<double> r = std::nullopt);

RadauStageSignal radau_cq_apply(const TransferFunction& K, const TimeFunction& g,
                                const TimeGrid& grid);

/// All-at-once solve of K(d_t^h) lambda = rhs in stage space.
RadauStageSignal radau_cq_solve(const TransferFunction& K, const RadauStageSignal& rhs);

/// Lagrange interpolant of the stage values as a degree-(stages-1) signal.
PiecewisePolynomial radau_to_piecewise(const RadauStageSignal& s);

/// Max deviation between p=2 DG-CQ applied to the Radau interpolant of g,
/// evaluated at the mapped Radau nodes, and the 3-stage RadauIIa CQ stages.
double radau_equivalence_check(const TimeFunction& g, const TimeGrid& grid,
                               const TransferFunction& K);

struct StabilityRatios {
    double nodal = 0.0;      ///< max_n ||u(t_n^-)||^2 / (t* int ||f||^2)
    double l2 = 0.0;         ///< int ||u||^2 / (t*^2 int ||f||^2)
    double pointwise = 0.0;  ///< sup_t ||u(t)||^2 / (t* int ||f||^2)
};

/// Runs the DG solve with the <f, v> right-hand side on a skew-Hermitian
/// system and measures the discrete stability ratios, t* = max(h ceil(T/h), 1).
StabilityRatios stability_probe(const Mat& a, const VectorTimeFunction& f,
                                const TimeGrid& grid);

}  // namespace pcq
