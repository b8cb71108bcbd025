#include "pcq/cqengine.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pcq/dft.hpp"
#include "pcq/parallel.hpp"

namespace pcq {

double default_radius(int N) { return std::pow(10.0, -16.0 / (2.0 * N)); }

namespace {

void check_admissible(const TransferFunction& K, double r, double h) {
    if (K.sigma <= 0.0) return;
    if ((1.0 - r * r) / (2.0 * h) <= K.sigma) {
        const double bound = (1.0 - r * r) / (2.0 * K.sigma);
        std::ostringstream msg;
        msg << "compute_weights: symbol '" << K.label << "' with sigma = " << K.sigma
            << " needs h < " << bound << " at radius r = " << r;
        throw AbscissaError(msg.str(), bound);
    }
}

// All samples K(delta(z_l)/h) on the circle |z| = r, z_l = r e^{-2 pi i l/(N+1)}.
std::vector<Mat> circle_samples(const TransferFunction& K, const TimeGrid& grid, double r) {
    const int M = grid.N + 1;
    std::vector<Mat> samples(M);
    parallel_for(M, [&](int l) {
        const double th = -2.0 * std::numbers::pi * l / M;
        const cplx z = r * std::polar(1.0, th);
        try {
            samples[l] = matrix_function(K, delta(grid.p, z), grid.h);
        } catch (const AbscissaError&) {
            throw;
        } catch (const std::exception& e) {
            throw NumericError("compute_weights: sample l=" + std::to_string(l) +
                               " failed: " + e.what());
        }
    });
    return samples;
}

ConvolutionWeights weights_sampled(const TransferFunction& K, const TimeGrid& grid, double r,
                                   std::vector<Mat>* samples_out = nullptr) {
    check_admissible(K, r, grid.h);
    const int M = grid.N + 1;
    const int m = grid.p + 1;
    const std::vector<Mat> samples = circle_samples(K, grid, r);
    if (samples_out) *samples_out = samples;

    ConvolutionWeights w;
    w.grid = grid;
    w.radius = r;
    w.weights.assign(M, Mat::Zero(m, m));
    std::vector<double> rpow(M);
    rpow[0] = 1.0;
    for (int n = 1; n < M; ++n) rpow[n] = rpow[n - 1] / r;
    std::vector<cplx> line(M);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int l = 0; l < M; ++l) line[l] = samples[l](i, j);
            const std::vector<cplx> y = dft(line, +1);
            for (int n = 0; n < M; ++n) w.weights[n](i, j) = y[n] * rpow[n] / double(M);
        }
    }
    return w;
}

// Matrix z-polynomial sum_k c_k (D0 + z D1)^k, returned as z-coefficients.
std::vector<Mat> matrix_poly_in_z(const std::vector<cplx>& c, const Mat& d0, const Mat& d1) {
    const int m = static_cast<int>(d0.rows());
    const int deg = static_cast<int>(c.size()) - 1;
    std::vector<Mat> acc(deg + 1, Mat::Zero(m, m));
    std::vector<Mat> power{Mat::Identity(m, m)};  // (D0 + z D1)^k, coefficientwise
    acc[0] += c[0] * Mat::Identity(m, m);
    for (int k = 1; k <= deg; ++k) {
        std::vector<Mat> next(power.size() + 1, Mat::Zero(m, m));
        for (size_t q = 0; q < power.size(); ++q) {
            next[q] += power[q] * d0;
            next[q + 1] += power[q] * d1;
        }
        power = std::move(next);
        for (size_t q = 0; q < power.size(); ++q) acc[q] += c[k] * power[q];
    }
    return acc;
}

// den(delta(z)/h) W(z) = num(delta(z)/h): since delta(z)/h is linear in z both
// sides are matrix polynomials, and matching powers of z gives an exact
// recurrence for the weights.
ConvolutionWeights weights_exact(const TransferFunction& K, const TimeGrid& grid, double r) {
    const RationalForm& rf = *K.rational;
    const DgMatrices dg = dg_matrices(grid.p);
    const Mat d0 = dg.stiffness.cast<cplx>() / grid.h;
    const Mat d1 = -(dg.trace0 * dg.trace1.transpose()).cast<cplx>() / grid.h;

    const std::vector<Mat> qpoly = matrix_poly_in_z(rf.den, d0, d1);
    const std::vector<Mat> rpoly = matrix_poly_in_z(rf.num, d0, d1);
    Eigen::PartialPivLU<Mat> q0(qpoly[0]);
    const int m = grid.p + 1;
    if ((qpoly[0] * q0.inverse() - Mat::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-6)
        throw NumericError("compute_weights: singular denominator block for symbol '" +
                           K.label + "'");

    ConvolutionWeights w;
    w.grid = grid;
    w.radius = r;
    w.exact = true;
    w.weights.resize(grid.N + 1);
    for (int n = 0; n <= grid.N; ++n) {
        Mat rhs = n < static_cast<int>(rpoly.size()) ? rpoly[n] : Mat::Zero(m, m);
        for (int q = 1; q < static_cast<int>(qpoly.size()) && q <= n; ++q)
            rhs -= qpoly[q] * w.weights[n - q];
        w.weights[n] = q0.solve(rhs);
    }
    return w;
}

}  // namespace

ConvolutionWeights compute_weights(const TransferFunction& K, const TimeGrid& grid,
                                   std::optional<double> r, WeightMethod method) {
    const double radius = r.value_or(default_radius(grid.N));
    if (!(radius > 0.0 && radius < 1.0))
        throw ContractError("compute_weights: radius must lie in (0,1)");
    switch (method) {
        case WeightMethod::Sampled:
            return weights_sampled(K, grid, radius);
        case WeightMethod::Exact:
            if (!K.rational)
                throw ContractError("compute_weights: symbol '" + K.label +
                                    "' has no rational form for the exact method");
            return weights_exact(K, grid, radius);
        case WeightMethod::Auto:
        default:
            return K.rational ? weights_exact(K, grid, radius)
                              : weights_sampled(K, grid, radius);
    }
}

double weights_series_error(const ConvolutionWeights& w, const TransferFunction& K) {
    const cplx zstar = w.radius / 2.0;
    Mat acc = Mat::Zero(w.grid.p + 1, w.grid.p + 1);
    cplx zp = 1.0;
    for (const Mat& wn : w.weights) {
        acc += wn * zp;
        zp *= zstar;
    }
    const Mat direct = matrix_function(K, delta(w.grid.p, zstar), w.grid.h);
    return (acc - direct).cwiseAbs().maxCoeff();
}

PiecewisePolynomial apply(const ConvolutionWeights& w, const PiecewisePolynomial& g) {
    if (!(g.grid == w.grid))
        throw ContractError("apply: signal grid does not match the weights' grid");
    const int N = w.grid.N;
    Mat out(w.grid.p + 1, N);
    parallel_for(N, [&](int n) {
        Vec acc = Vec::Zero(w.grid.p + 1);
        for (int j = 0; j <= n; ++j) acc += w.weights[j] * g.coeffs.col(n - j);
        out.col(n) = acc;
    });
    return PiecewisePolynomial(w.grid, std::move(out));
}

PiecewisePolynomial apply(const TransferFunction& K, const PiecewisePolynomial& g,
                          WeightMethod method) {
    return apply(compute_weights(K, g.grid, std::nullopt, method), g);
}

PiecewisePolynomial apply(const TransferFunction& K, const TimeFunction& g,
                          const TimeGrid& grid, WeightMethod method) {
    return apply(compute_weights(K, grid, std::nullopt, method), interpolate(g, grid));
}

SolveResult solve_marching(const TransferFunction& K, const PiecewisePolynomial& rhs,
                           const MarchingOptions& opts) {
    if (opts.stab_points < 0) throw ContractError("solve_marching: stab_points must be >= 0");
    const TimeGrid& grid = rhs.grid;
    const double r = opts.radius.value_or(default_radius(grid.N));
    ConvolutionWeights w;
    if (K.rational) {
        w = weights_exact(K, grid, r);
        Eigen::FullPivLU<Mat> lu(w.weights[0]);
        if (!lu.isInvertible())
            throw NumericError("solve_marching: K(delta(0)/h) is singular");
    } else {
        std::vector<Mat> samples;
        w = weights_sampled(K, grid, r, &samples);
        for (int l = 0; l < static_cast<int>(samples.size()); ++l) {
            Eigen::FullPivLU<Mat> lu(samples[l]);
            if (!lu.isInvertible())
                throw NumericError("solve_marching: K(delta(z)/h) singular at circle sample l=" +
                                   std::to_string(l));
        }
    }

    const int m = grid.p + 1;
    Mat w0tilde;
    if (opts.stab_points == 0) {
        w0tilde = matrix_function_diagonalize(K, delta(grid.p, 0.0), grid.h);
    } else {
        const int q = opts.stab_points;
        const double eps_eff = std::pow(1e-16, 1.0 / (2.0 * std::ceil(q / 2.0)));
        w0tilde = Mat::Zero(m, m);
        for (int j = 0; j < q; ++j) {
            const cplx z = eps_eff * std::polar(1.0, 2.0 * std::numbers::pi * j / q);
            w0tilde += matrix_function(K, delta(grid.p, z), grid.h);
        }
        w0tilde /= static_cast<double>(q);
    }

    Eigen::PartialPivLU<Mat> lu(w0tilde);
    {
        const Mat winv = lu.inverse();
        const double cond = w0tilde.cwiseAbs().maxCoeff() * winv.cwiseAbs().maxCoeff()
                            * m;
        if (!winv.allFinite() || cond > 1e15)
            throw NumericError(
                "solve_marching: stabilized diagonal block is singular or ill-conditioned "
                "(cond~" + std::to_string(cond) + "); try larger stab_points");
    }

    const int N = grid.N;
    Mat lambda(m, N);
    for (int n = 0; n < N; ++n) {
        Vec acc = rhs.coeffs.col(n);
        for (int j = 1; j <= n; ++j) acc -= w.weights[j] * lambda.col(n - j);
        lambda.col(n) = lu.solve(acc);
    }

    // residual of the unstabilized triangular system
    double residual = 0.0;
    for (int n = 0; n < N; ++n) {
        Vec acc = rhs.coeffs.col(n);
        for (int j = 0; j <= n; ++j) acc -= w.weights[j] * lambda.col(n - j);
        residual = std::max(residual, acc.cwiseAbs().maxCoeff());
    }

    SolveResult res;
    res.solution = PiecewisePolynomial(grid, std::move(lambda));
    res.residual = residual;
    const double scale = std::max(1.0, rhs.coeffs.cwiseAbs().maxCoeff());
    res.residual_warning = residual > opts.residual_tol * scale;
    return res;
}

namespace {

// one pass of the scaled-DFT decoupled solve
Mat allatonce_pass(const std::vector<Eigen::PartialPivLU<Mat>>& lus, const Mat& rhs,
                   double radius) {
    const int m = static_cast<int>(rhs.rows());
    const int N = static_cast<int>(rhs.cols());
    const int M = N + 1;

    Mat hat(m, M);
    std::vector<cplx> line(M);
    for (int i = 0; i < m; ++i) {
        double rp = 1.0;
        for (int n = 0; n < M; ++n) {
            line[n] = (n < N) ? rhs(i, n) * rp : cplx(0.0);
            rp *= radius;
        }
        const std::vector<cplx> y = dft(line, -1);
        for (int l = 0; l < M; ++l) hat(i, l) = y[l];
    }

    Mat sol(m, M);
    parallel_for(M, [&](int l) {
        const Vec x = lus[l].solve(hat.col(l));
        if (!x.allFinite())
            throw NumericError("solve_allatonce: singular system at sample l=" +
                               std::to_string(l));
        sol.col(l) = x;
    });

    Mat lambda(m, N);
    for (int i = 0; i < m; ++i) {
        for (int l = 0; l < M; ++l) line[l] = sol(i, l);
        const std::vector<cplx> y = dft(line, +1);
        double rp = 1.0;
        for (int n = 0; n < N; ++n) {
            lambda(i, n) = y[n] / (rp * M);
            rp *= radius;
        }
    }
    return lambda;
}

Mat convolve(const ConvolutionWeights& w, const Mat& x) {
    Mat out(x.rows(), x.cols());
    parallel_for(static_cast<int>(x.cols()), [&](int n) {
        Vec acc = Vec::Zero(x.rows());
        for (int j = 0; j <= n; ++j) acc += w.weights[j] * x.col(n - j);
        out.col(n) = acc;
    });
    return out;
}

}  // namespace

SolveResult solve_allatonce(const TransferFunction& K, const PiecewisePolynomial& rhs,
                            std::optional<double> r) {
    const TimeGrid& grid = rhs.grid;
    const double radius = r.value_or(default_radius(grid.N));
    check_admissible(K, radius, grid.h);
    const int N = grid.N;
    const int M = N + 1;

    std::vector<Eigen::PartialPivLU<Mat>> lus(M);
    parallel_for(M, [&](int l) {
        const cplx z = radius * std::polar(1.0, -2.0 * std::numbers::pi * l / M);
        try {
            lus[l] = Eigen::PartialPivLU<Mat>(matrix_function(K, delta(grid.p, z), grid.h));
        } catch (const AbscissaError&) {
            throw;
        } catch (const std::exception& e) {
            throw NumericError("solve_allatonce: sample l=" + std::to_string(l) +
                               " failed: " + e.what());
        }
    });

    // refinement passes remove the r^{-n} roundoff amplification of the
    // scaled transform; the residual uses the series weights directly
    const ConvolutionWeights w = compute_weights(K, grid, radius);
    const double scale = std::max(1.0, rhs.coeffs.cwiseAbs().maxCoeff());
    Mat lambda = allatonce_pass(lus, rhs.coeffs, radius);
    double residual = 0.0;
    for (int pass = 0; pass < 3; ++pass) {
        const Mat res_mat = rhs.coeffs - convolve(w, lambda);
        residual = res_mat.cwiseAbs().maxCoeff();
        if (residual <= 1e-14 * scale || pass == 2) break;
        lambda += allatonce_pass(lus, res_mat, radius);
    }

    SolveResult res;
    res.solution = PiecewisePolynomial(grid, std::move(lambda));
    res.residual = residual;
    return res;
}

}  // namespace pcq
