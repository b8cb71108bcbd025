#pragma once

#include <vector>

namespace pcq {

/// Nodes and weights of a quadrature rule on (0,1).
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int size() const { return static_cast<int>(nodes.size()); }
};

/// n-point Gauss-Legendre rule on (0,1); exact for polynomials of degree 2n-1.
QuadRule gauss_legendre(int n);

/// Right-sided Radau nodes on (0,1], s points, last node exactly 1.
/// These are the roots of L_{s-1}(2t-1) - L_s(2t-1).
std::vector<double> radau_nodes(int s);

}  // namespace pcq
