#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pcq/types.hpp"

namespace pcq {

/// Rational form num(s)/den(s) with ascending coefficient lists.
/// Symbols carrying one admit exact convolution-weight recurrences.
struct RationalForm {
    std::vector<cplx> num;
    std::vector<cplx> den;
};

/// An analytic symbol s -> K(s) on the half-plane Re s > sigma with
/// |K(s)| <= C |s|^mu.  Evaluation maps must be re-entrant.
struct TransferFunction {
    std::function<cplx(cplx)> eval;
    double sigma = 0.0;  ///< abscissa of analyticity
    double mu = 0.0;     ///< growth exponent (advisory)
    std::string label;
    std::optional<RationalForm> rational;

    cplx operator()(cplx s) const { return eval(s); }
};

TransferFunction sym_identity();
TransferFunction sym_s();
TransferFunction sym_s_inv();

/// K(s) = (s - zeta)^{-1}; requires Re zeta <= 0 so sigma = 0 suffices.
TransferFunction sym_resolvent(cplx zeta);

/// Single-layer eigenvalue on the unit sphere: V(s) = (1 - e^{-2s})/(2s),
/// with a series branch for |s| < 1e-2.
TransferFunction sphere_V();

/// Double-layer combination 1/2 + K(s) = (s - 1 + (s+1)e^{-2s})/(2s).
TransferFunction sphere_half_plus_K();

/// -1/2 + K(s) = -(s+1) V(s).
TransferFunction sphere_mhalf_plus_K();

/// s * V(s) = (1 - e^{-2s})/2, the left-hand symbol of the sphere problem.
TransferFunction sphere_sV();

TransferFunction sym_product(const TransferFunction& k1, const TransferFunction& k2);
TransferFunction sym_scale(cplx c, const TransferFunction& k);

/// Built-ins by label ("s", "s_inv", "sphereV", "sV", "mhalf_plus_K", "identity");
/// throws ContractError for unknown labels.
TransferFunction symbol_registry(const std::string& label);

std::vector<std::string> symbol_registry_labels();

}  // namespace pcq
