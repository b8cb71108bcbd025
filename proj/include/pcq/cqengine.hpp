#pragma once

#include <optional>
#include <vector>

#include "pcq/cqsymbol.hpp"
#include "pcq/symbols.hpp"
#include "pcq/timebasis.hpp"
#include "pcq/types.hpp"

namespace pcq {

/// Default sampling radius r = 10^(-16/(2N)) for the weight/solver circles.
double default_radius(int N);

/// Convolution weights W_0..W_N of K(delta(z)/h) as a power series in z.
struct ConvolutionWeights {
    TimeGrid grid;
    double radius = 0.0;        ///< sampling radius (also recorded for the exact path)
    std::vector<Mat> weights;   ///< N+1 matrices, each (p+1) x (p+1)
    bool exact = false;         ///< produced by the rational recurrence
};

enum class WeightMethod {
    Auto,     ///< exact recurrence when a rational form is available, else sampled
    Sampled,  ///< trapezoidal circle sampling + inverse DFT
    Exact,    ///< rational recurrence; rejects symbols without a rational form
};

ConvolutionWeights compute_weights(const TransferFunction& K, const TimeGrid& grid,
                                   std::optional<double> r = std::nullopt,
                                   WeightMethod method = WeightMethod::Auto);

/// max entrywise error of sum_n W_n z*^n against K(delta(z*)/h) at z* = radius/2.
double weights_series_error(const ConvolutionWeights& w, const TransferFunction& K);

/// Causal block convolution (K(d_t^h) g)(t_n + .) = sum_j W_j [I_p g](t_{n-j} + .).
PiecewisePolynomial apply(const ConvolutionWeights& w, const PiecewisePolynomial& g);
PiecewisePolynomial apply(const TransferFunction& K, const PiecewisePolynomial& g,
                          WeightMethod method = WeightMethod::Auto);
PiecewisePolynomial apply(const TransferFunction& K, const TimeFunction& g,
                          const TimeGrid& grid, WeightMethod method = WeightMethod::Auto);

struct SolveResult {
    PiecewisePolynomial solution;
    double residual = 0.0;        ///< max block residual of the triangular system
    bool residual_warning = false;
};

struct MarchingOptions {
    int stab_points = 4;          ///< 0 evaluates K(delta(0)/h) directly
    std::optional<double> radius;
    double residual_tol = 1e-6;
};

/// Solves K(d_t^h) lambda = rhs by forward substitution with a stabilized
/// diagonal block: the order-0 weight of a q-point trapezoidal rule on a tiny
/// circle of radius eps^(1/(2 ceil(q/2))), eps = 1e-16.
SolveResult solve_marching(const TransferFunction& K, const PiecewisePolynomial& rhs,
                           const MarchingOptions& opts = {});

/// Solves by scaled DFT decoupling: one dense (p+1) system per circle sample.
SolveResult solve_allatonce(const TransferFunction& K, const PiecewisePolynomial& rhs,
                            std::optional<double> r = std::nullopt);

}  // namespace pcq
