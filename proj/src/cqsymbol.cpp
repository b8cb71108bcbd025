#include "pcq/cqsymbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pcq/timebasis.hpp"

namespace pcq {

DeltaMatrix delta(int p, cplx z) {
    const DgMatrices dg = dg_matrices(p);
    DeltaMatrix d;
    d.z = z;
    d.p = p;
    d.matrix = dg.stiffness.cast<cplx>() -
               z * (dg.trace0 * dg.trace1.transpose()).cast<cplx>();

    Eigen::ComplexEigenSolver<Mat> es(d.matrix, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "delta: eigensolver failed to converge for p=" << p << ", z=" << z;
        throw NumericError(msg.str());
    }
    d.eigenvalues = es.eigenvalues();
    d.eigenvectors = es.eigenvectors();
    Eigen::JacobiSVD<Mat> svd(d.eigenvectors);
    const double smin = svd.singularValues().minCoeff();
    d.eig_condition = smin > 0.0 ? svd.singularValues().maxCoeff() / smin
                                 : std::numeric_limits<double>::infinity();
    return d;
}

SpectrumResult spectrum(const DeltaMatrix& d) {
    SpectrumResult r;
    r.eigenvalues.assign(d.eigenvalues.data(), d.eigenvalues.data() + d.eigenvalues.size());
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end(),
              [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real()
                                                               : a.imag() < b.imag(); });
    r.eig_condition = d.eig_condition;
    return r;
}

namespace {

void check_abscissa(const TransferFunction& f, const DeltaMatrix& d, double h) {
    if (f.sigma <= 0.0) return;
    double min_re = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d.eigenvalues.size(); ++i)
        min_re = std::min(min_re, d.eigenvalues[i].real() / h);
    if (min_re <= f.sigma) {
        const double zabs = std::abs(d.z);
        const double bound = (1.0 - zabs * zabs) / (2.0 * f.sigma);
        std::ostringstream msg;
        msg << "matrix_function: spectrum of delta(z)/h reaches Re = " << min_re
            << " <= sigma = " << f.sigma << " for symbol '" << f.label
            << "'; admissible timesteps require h < " << bound;
        throw AbscissaError(msg.str(), bound);
    }
}

Mat diagonalization_path(const TransferFunction& f, const DeltaMatrix& d, double h) {
    Vec fvals(d.eigenvalues.size());
    for (int i = 0; i < d.eigenvalues.size(); ++i) fvals[i] = f(d.eigenvalues[i] / h);
    const Mat qd = d.eigenvectors * fvals.asDiagonal();
    // F = Q f(Lambda) Q^{-1} via Q^T F^T = (Q f(Lambda))^T
    return Mat(d.eigenvectors.transpose().partialPivLu().solve(qd.transpose())).transpose();
}

Mat contour_path(const TransferFunction& f, const DeltaMatrix& d, double h) {
    const double zabs = std::abs(d.z);
    if (zabs >= 1.0)
        throw NumericError("matrix_function: contour fallback needs |z| < 1");
    const double a = (1.0 - zabs * zabs) / (2.0 * h);
    const double b = kSpectralRadiusC * (d.p + 1.0) * (d.p + 1.0) / h;
    // circle through Re = a/2 containing {Re >= a, |lambda| <= b}
    const double radius = std::max((b * b - 0.75 * a * a) / a, b);
    const double center = 0.5 * a + radius;
    const Mat dh = d.matrix / h;
    const Mat id = Mat::Identity(dh.rows(), dh.cols());

    Mat prev;
    for (int nq = 64; nq <= (1 << 21); nq *= 2) {
        Mat acc = Mat::Zero(dh.rows(), dh.cols());
        for (int k = 0; k < nq; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / nq;
            const cplx w = std::polar(1.0, theta);
            const cplx lambda = center + radius * w;
            acc += f(lambda) * radius * w * (lambda * id - dh).partialPivLu().inverse();
        }
        acc /= static_cast<double>(nq);
        if (prev.size() > 0) {
            const double diff = (acc - prev).cwiseAbs().maxCoeff();
            if (diff <= 1e-12 * std::max(1.0, acc.cwiseAbs().maxCoeff())) return acc;
        }
        prev = acc;
    }
    std::ostringstream msg;
    msg << "matrix_function: contour quadrature did not converge for p=" << d.p
        << ", z=" << d.z;
    throw NumericError(msg.str());
}

}  // namespace

Mat matrix_function(const TransferFunction& f, const DeltaMatrix& d, double h) {
    check_abscissa(f, d, h);
    if (d.eig_condition > kEigCondFallbackThreshold) return contour_path(f, d, h);
    return diagonalization_path(f, d, h);
}

Mat matrix_function_diagonalize(const TransferFunction& f, const DeltaMatrix& d, double h) {
    check_abscissa(f, d, h);
    return diagonalization_path(f, d, h);
}

Mat matrix_function_dense(const TransferFunction& f, const Mat& a) {
    Eigen::ComplexEigenSolver<Mat> es(a, true);
    if (es.info() != Eigen::Success)
        throw NumericError("matrix_function_dense: eigensolver failed");
    Vec fvals(a.rows());
    for (int i = 0; i < a.rows(); ++i) fvals[i] = f(es.eigenvalues()[i]);
    const Mat qd = es.eigenvectors() * fvals.asDiagonal();
    return Mat(es.eigenvectors().transpose().partialPivLu().solve(qd.transpose())).transpose();
}

}  // namespace pcq
