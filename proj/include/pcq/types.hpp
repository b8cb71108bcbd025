#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pcq {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;

/// Violated precondition or malformed input.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numeric procedure failed (non-convergence, singular system, ...).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Transfer function evaluated outside its half-plane of analyticity.
class AbscissaError : public NumericError {
public:
    AbscissaError(const std::string& msg, double admissible_h)
        : NumericError(msg), admissible_h(admissible_h) {}
    double admissible_h;
};

/// Uniform time grid with N steps of size h and polynomial degree p per step.
///
/// Nodes are t_j = j*h for j = 0..N; the final time is T = N*h.
struct TimeGrid {
    double h = 0.0;
    int N = 0;
    int p = 0;

    TimeGrid() = default;
    TimeGrid(double h, int N, int p) : h(h), N(N), p(p) {
        if (!(h > 0.0)) throw ContractError("TimeGrid: h must be positive");
        if (N < 1) throw ContractError("TimeGrid: N must be >= 1");
        if (p < 0) throw ContractError("TimeGrid: p must be >= 0");
    }

    double T() const { return N * h; }
    double node(int j) const { return j * h; }
    int stages() const { return p + 1; }

    bool operator==(const TimeGrid& o) const { return h == o.h && N == o.N && p == o.p; }
};

}  // namespace pcq
