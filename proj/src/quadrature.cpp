#include "pcq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pcq/types.hpp"

namespace pcq {

namespace {

// Legendre value and derivative on [-1,1] by the three-term recurrence.
void legendre_pair(int n, double x, double& pn, double& dpn) {
    double p0 = 1.0, p1 = x;
    if (n == 0) { pn = p0; dpn = 0.0; return; }
    double dp0 = 0.0, dp1 = 1.0;
    for (int j = 1; j < n; ++j) {
        const double p2 = ((2 * j + 1) * x * p1 - j * p0) / (j + 1);
        const double dp2 = ((2 * j + 1) * (p1 + x * dp1) - j * dp0) / (j + 1);
        p0 = p1; p1 = p2;
        dp0 = dp1; dp1 = dp2;
    }
    pn = p1;
    dpn = dp1;
}

}  // namespace

QuadRule gauss_legendre(int n) {
    if (n < 1) throw ContractError("gauss_legendre: need n >= 1");
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-based initial guess, then Newton on L_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pn = 0.0, dpn = 0.0;
        for (int it = 0; it < 100; ++it) {
            legendre_pair(n, x, pn, dpn);
            const double dx = pn / dpn;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        legendre_pair(n, x, pn, dpn);
        // map [-1,1] -> (0,1): node (x+1)/2, weight w/2
        rule.nodes[n - 1 - i] = 0.5 * (x + 1.0);
        rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dpn * dpn);
    }
    return rule;
}

std::vector<double> radau_nodes(int s) {
    if (s < 1) throw ContractError("radau_nodes: need s >= 1");
    std::vector<double> nodes;
    nodes.reserve(s);
    auto q = [s](double x) {
        double pa, dpa, pb, dpb;
        legendre_pair(s - 1, x, pa, dpa);
        legendre_pair(s, x, pb, dpb);
        return pa - pb;
    };
    auto dq = [s](double x) {
        double pa, dpa, pb, dpb;
        legendre_pair(s - 1, x, pa, dpa);
        legendre_pair(s, x, pb, dpb);
        return dpa - dpb;
    };
    // bracket the s-1 interior roots on (-1, 1) by a fine scan, then polish
    const int grid = 64 * s;
    double xprev = -1.0, qprev = q(xprev);
    for (int k = 1; k < grid && static_cast<int>(nodes.size()) < s - 1; ++k) {
        const double x = -1.0 + 2.0 * k / grid * (1.0 - 1e-9);
        const double qx = q(x);
        if (qprev == 0.0) nodes.push_back(0.5 * (xprev + 1.0));
        else if (qprev * qx < 0.0) {
            double lo = xprev, hi = x;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (q(lo) * q(mid) <= 0.0) hi = mid; else lo = mid;
            }
            double root = 0.5 * (lo + hi);
            for (int it = 0; it < 8; ++it) root -= q(root) / dq(root);
            nodes.push_back(0.5 * (root + 1.0));
        }
        xprev = x; qprev = qx;
    }
    if (static_cast<int>(nodes.size()) != s - 1)
        throw NumericError("radau_nodes: failed to bracket all interior roots");
    nodes.push_back(1.0);
    std::sort(nodes.begin(), nodes.end());
    return nodes;
}

}  // namespace pcq
