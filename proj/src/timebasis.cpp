#include "pcq/timebasis.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "pcq/quadrature.hpp"

namespace pcq {

RealVec basis_eval(int p, double tau) {
    if (p < 0) throw ContractError("basis_eval: p must be >= 0");
    if (!(tau >= 0.0 && tau <= 1.0))
        throw ContractError("basis_eval: tau outside [0,1]: " + std::to_string(tau));
    const double x = 2.0 * tau - 1.0;
    RealVec v(p + 1);
    double l0 = 1.0, l1 = x;
    v[0] = 1.0;
    if (p >= 1) v[1] = std::sqrt(3.0) * x;
    for (int j = 1; j < p; ++j) {
        const double l2 = ((2 * j + 1) * x * l1 - j * l0) / (j + 1);
        v[j + 1] = std::sqrt(2.0 * j + 3.0) * l2;
        l0 = l1;
        l1 = l2;
    }
    return v;
}

RealVec basis_deriv_eval(int p, double tau) {
    if (p < 0) throw ContractError("basis_deriv_eval: p must be >= 0");
    if (!(tau >= 0.0 && tau <= 1.0))
        throw ContractError("basis_deriv_eval: tau outside [0,1]");
    const double x = 2.0 * tau - 1.0;
    RealVec v(p + 1);
    double l0 = 1.0, l1 = x, d0 = 0.0, d1 = 1.0;
    v[0] = 0.0;
    if (p >= 1) v[1] = std::sqrt(3.0) * 2.0;
    for (int j = 1; j < p; ++j) {
        const double l2 = ((2 * j + 1) * x * l1 - j * l0) / (j + 1);
        const double d2 = ((2 * j + 1) * (l1 + x * d1) - j * d0) / (j + 1);
        v[j + 1] = std::sqrt(2.0 * j + 3.0) * 2.0 * d2;
        l0 = l1; l1 = l2;
        d0 = d1; d1 = d2;
    }
    return v;
}

DgMatrices dg_matrices(int p) {
    if (p < 0) throw ContractError("dg_matrices: p must be >= 0");
    DgMatrices m;
    m.mass = RealMat::Identity(p + 1, p + 1);
    m.stiffness.resize(p + 1, p + 1);
    for (int i = 0; i <= p; ++i) {
        for (int j = 0; j <= p; ++j) {
            const double mu = (j > i) ? 1.0 : (((i + j) % 2 == 0) ? 1.0 : -1.0);
            m.stiffness(i, j) = std::sqrt((2.0 * i + 1.0) * (2.0 * j + 1.0)) * mu;
        }
    }
    m.trace0 = basis_eval(p, 0.0);
    m.trace1 = basis_eval(p, 1.0);
    return m;
}

PiecewisePolynomial::PiecewisePolynomial(const TimeGrid& grid, Mat c)
    : grid(grid), coeffs(std::move(c)) {
    if (coeffs.rows() != grid.p + 1 || coeffs.cols() != grid.N)
        throw ContractError("PiecewisePolynomial: coefficient shape does not match grid");
}

PiecewisePolynomial PiecewisePolynomial::zero(const TimeGrid& grid) {
    return PiecewisePolynomial(grid, Mat::Zero(grid.p + 1, grid.N));
}

cplx PiecewisePolynomial::eval(double t) const {
    const double x = t / grid.h;
    if (!(t > 0.0) || x > grid.N * (1.0 + 1e-12))
        throw ContractError("PiecewisePolynomial::eval: t outside (0, T]");
    int n = static_cast<int>(std::floor(x));
    double tau = x - n;
    // left-continuity: snap node hits to tau = 1 of the previous element
    if (tau < 1e-12 * std::max(1.0, x) && n >= 1) {
        n -= 1;
        tau = 1.0;
    }
    if (n >= grid.N) {
        n = grid.N - 1;
        tau = 1.0;
    }
    const RealVec phi = basis_eval(grid.p, std::min(tau, 1.0));
    cplx v = 0.0;
    for (int j = 0; j <= grid.p; ++j) v += coeffs(j, n) * phi[j];
    return v;
}

cplx PiecewisePolynomial::node_value(int n) const {
    if (n < 1 || n > grid.N) throw ContractError("node_value: n outside 1..N");
    const RealVec phi = basis_eval(grid.p, 1.0);
    cplx v = 0.0;
    for (int j = 0; j <= grid.p; ++j) v += coeffs(j, n - 1) * phi[j];
    return v;
}

double PiecewisePolynomial::max_abs(int samples) const {
    double m = 0.0;
    for (int i = 1; i <= samples; ++i)
        m = std::max(m, std::abs(eval(grid.T() * i / samples)));
    return m;
}

namespace {

// One element's coefficients by Gauss-Legendre quadrature, doubling the rule
// until two levels agree to 1e-13.  first_m coefficients come from integrals.
Vec element_coeffs(const TimeFunction& g, double t0, double h, int p, int first_m, int elem) {
    const int n0 = std::max(2 * p + 8, 24);
    Vec prev;
    for (int level = 0; level <= 8; ++level) {
        const QuadRule rule = gauss_legendre(n0 << level);
        Vec alpha = Vec::Zero(p + 1);
        for (int q = 0; q < rule.size(); ++q) {
            const cplx gval = g(t0 + h * rule.nodes[q]);
            if (!std::isfinite(gval.real()) || !std::isfinite(gval.imag()))
                throw ContractError("interpolate/l2_project: non-finite sample of g on element " +
                                    std::to_string(elem));
            const RealVec phi = basis_eval(p, rule.nodes[q]);
            for (int j = 0; j < first_m; ++j) alpha[j] += rule.weights[q] * gval * phi[j];
        }
        if (level > 0 && (alpha - prev).cwiseAbs().maxCoeff() <=
                             1e-13 * std::max(1.0, alpha.cwiseAbs().maxCoeff()))
            return alpha;
        prev = alpha;
    }
    throw NumericError("coefficient quadrature did not converge on element " +
                       std::to_string(elem));
}

}  // namespace

PiecewisePolynomial interpolate(const TimeFunction& g, const TimeGrid& grid) {
    const int p = grid.p;
    Mat coeffs(p + 1, grid.N);
    const RealVec sq = basis_eval(p, 1.0);  // sqrt(2j+1)
    for (int n = 0; n < grid.N; ++n) {
        const cplx endpoint = g(grid.node(n + 1));
        if (!std::isfinite(endpoint.real()) || !std::isfinite(endpoint.imag()))
            throw ContractError("interpolate: non-finite sample of g on element " +
                                std::to_string(n));
        if (p == 0) {
            coeffs(0, n) = endpoint;
            continue;
        }
        Vec alpha = element_coeffs(g, grid.node(n), grid.h, p, p, n);
        cplx acc = 0.0;
        for (int j = 0; j < p; ++j) acc += alpha[j] * sq[j];
        alpha[p] = (endpoint - acc) / sq[p];
        coeffs.col(n) = alpha;
    }
    return PiecewisePolynomial(grid, std::move(coeffs));
}

PiecewisePolynomial l2_project(const TimeFunction& g, const TimeGrid& grid) {
    Mat coeffs(grid.p + 1, grid.N);
    for (int n = 0; n < grid.N; ++n)
        coeffs.col(n) = element_coeffs(g, grid.node(n), grid.h, grid.p, grid.p + 1, n);
    return PiecewisePolynomial(grid, std::move(coeffs));
}

cplx integral_value(const PiecewisePolynomial& u, double t) {
    const TimeGrid& grid = u.grid;
    if (t == 0.0) return 0.0;
    const double x = t / grid.h;
    if (!(t > 0.0) || x > grid.N * (1.0 + 1e-12))
        throw ContractError("integral_value: t outside [0, T]");
    int n = static_cast<int>(std::floor(x));
    double tau = x - n;
    if (tau < 1e-12 * std::max(1.0, x) && n >= 1) {
        n -= 1;
        tau = 1.0;
    }
    if (n >= grid.N) {
        n = grid.N - 1;
        tau = 1.0;
    }
    // full elements: only phi_0 has nonzero mean
    cplx acc = 0.0;
    for (int m = 0; m < n; ++m) acc += grid.h * u.coeffs(0, m);
    // partial element via int_0^tau phi_j = (L_{j+1} - L_{j-1})(2 tau - 1) / (2 sqrt(2j+1))
    const double xi = 2.0 * tau - 1.0;
    const int p = grid.p;
    std::vector<double> leg(p + 2);
    leg[0] = 1.0;
    if (p + 1 >= 1) leg[1] = xi;
    for (int j = 1; j <= p; ++j) leg[j + 1] = ((2 * j + 1) * xi * leg[j] - j * leg[j - 1]) / (j + 1);
    cplx part = u.coeffs(0, n) * tau;
    for (int j = 1; j <= p; ++j)
        part += u.coeffs(j, n) * (leg[j + 1] - leg[j - 1]) / (2.0 * std::sqrt(2.0 * j + 1.0));
    return acc + grid.h * part;
}

}  // namespace pcq
