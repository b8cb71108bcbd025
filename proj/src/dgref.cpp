#include "pcq/dgref.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pcq/dft.hpp"
#include "pcq/parallel.hpp"
#include "pcq/quadrature.hpp"

namespace pcq {

namespace {

Mat forcing_coeffs(const TimeFunction& g, const TimeGrid& grid, ForcingProjection proj) {
    const PiecewisePolynomial pp = (proj == ForcingProjection::Interpolation)
                                       ? interpolate(g, grid)
                                       : l2_project(g, grid);
    return pp.coeffs;
}

}  // namespace

PiecewisePolynomial ode_solve(cplx zeta, const TimeFunction& g, const TimeGrid& grid,
                              ForcingProjection proj) {
    const DgMatrices dg = dg_matrices(grid.p);
    const int m = grid.p + 1;
    const Mat step = dg.stiffness.cast<cplx>() - grid.h * zeta * Mat::Identity(m, m);
    Eigen::PartialPivLU<Mat> lu(step);
    if (!lu.inverse().allFinite()) {
        std::ostringstream msg;
        msg << "ode_solve: singular step matrix at zeta*h = " << zeta * grid.h;
        throw NumericError(msg.str());
    }
    const Mat b = (dg.trace0 * dg.trace1.transpose()).cast<cplx>();
    const Mat gc = forcing_coeffs(g, grid, proj);

    Mat y(m, grid.N);
    Vec prev = Vec::Zero(m);
    for (int n = 0; n < grid.N; ++n) {
        y.col(n) = lu.solve(b * prev + grid.h * gc.col(n));
        prev = y.col(n);
    }
    return PiecewisePolynomial(grid, std::move(y));
}

std::vector<PiecewisePolynomial> ode_solve(const LinearSystem& sys, const TimeGrid& grid,
                                           ForcingProjection proj) {
    const int m = static_cast<int>(sys.a.rows());
    if (sys.a.cols() != m) throw ContractError("ode_solve: A must be square");
    if (!sys.a.allFinite()) throw ContractError("ode_solve: A has non-finite entries");
    const int q = grid.p + 1;

    // component-wise projection of the forcing
    std::vector<Mat> gc(m);
    for (int k = 0; k < m; ++k) {
        auto fk = [&sys, k](double t) { return sys.forcing(t)[k]; };
        gc[k] = forcing_coeffs(fk, grid, proj);
    }

    const DgMatrices dg = dg_matrices(grid.p);
    const Mat s = dg.stiffness.cast<cplx>();
    const Mat b = (dg.trace0 * dg.trace1.transpose()).cast<cplx>();

    Eigen::ComplexEigenSolver<Mat> es(sys.a.transpose(), true);
    if (es.info() != Eigen::Success)
        throw NumericError("ode_solve: eigensolver failed on A^T");
    const Mat w = es.eigenvectors();
    Eigen::JacobiSVD<Mat> svd(w);
    const double cond = svd.singularValues().maxCoeff() / svd.singularValues().minCoeff();

    Mat y = Mat::Zero(q, static_cast<long>(grid.N) * m);  // step-major blocks of width m
    auto yblk = [&](int n) { return y.middleCols(static_cast<long>(n) * m, m); };

    if (cond < 1e8) {
        // S Y - h Y A^T = B Y_prev + h G, decoupled through the eigenbasis of A^T
        std::vector<Eigen::PartialPivLU<Mat>> lus;
        lus.reserve(m);
        for (int k = 0; k < m; ++k)
            lus.emplace_back(s - grid.h * es.eigenvalues()[k] * Mat::Identity(q, q));
        Eigen::PartialPivLU<Mat> wlu(w);
        Mat prev = Mat::Zero(q, m);
        for (int n = 0; n < grid.N; ++n) {
            Mat rhs(q, m);
            for (int k = 0; k < m; ++k) rhs.col(k) = grid.h * gc[k].col(n);
            rhs += b * prev;
            const Mat rhs_t = rhs * w;
            Mat sol_t(q, m);
            for (int k = 0; k < m; ++k) sol_t.col(k) = lus[k].solve(rhs_t.col(k));
            // undo the basis change: sol = sol_t * w^{-1}
            yblk(n) = wlu.solve(sol_t.transpose()).transpose();
            prev = yblk(n);
        }
    } else {
        // dense Kronecker solve (I (x) S - h A (x) I)
        Mat big = Mat::Zero(static_cast<long>(q) * m, static_cast<long>(q) * m);
        for (int k = 0; k < m; ++k) big.block(static_cast<long>(k) * q, static_cast<long>(k) * q, q, q) = s;
        for (int k = 0; k < m; ++k)
            for (int j = 0; j < m; ++j)
                big.block(static_cast<long>(k) * q, static_cast<long>(j) * q, q, q) -=
                    grid.h * sys.a(j, k) * Mat::Identity(q, q);
        Eigen::PartialPivLU<Mat> lu(big);
        Mat prev = Mat::Zero(q, m);
        for (int n = 0; n < grid.N; ++n) {
            Vec rhs(static_cast<long>(q) * m);
            const Mat carry = b * prev;
            for (int k = 0; k < m; ++k)
                rhs.segment(static_cast<long>(k) * q, q) = carry.col(k) + grid.h * gc[k].col(n);
            const Vec sol = lu.solve(rhs);
            for (int k = 0; k < m; ++k) yblk(n).col(k) = sol.segment(static_cast<long>(k) * q, q);
            prev = yblk(n);
        }
    }

    std::vector<PiecewisePolynomial> out;
    out.reserve(m);
    for (int k = 0; k < m; ++k) {
        Mat ck(q, grid.N);
        for (int n = 0; n < grid.N; ++n) ck.col(n) = yblk(n).col(k);
        out.emplace_back(grid, std::move(ck));
    }
    return out;
}

RadauTableau radau_tableau(int stages) {
    if (stages < 1) throw ContractError("radau_tableau: stages must be >= 1");
    RadauTableau t;
    t.stages = stages;
    const std::vector<double> nodes = radau_nodes(stages);
    t.c = Eigen::Map<const RealVec>(nodes.data(), stages);
    // order conditions per row: sum_j a_ij c_j^{k-1} = c_i^k / k, k = 1..s
    RealMat vand(stages, stages);
    for (int k = 0; k < stages; ++k)
        for (int j = 0; j < stages; ++j) vand(k, j) = std::pow(t.c[j], k);
    Eigen::PartialPivLU<RealMat> lu(vand);
    t.a.resize(stages, stages);
    for (int i = 0; i < stages; ++i) {
        RealVec rhs(stages);
        for (int k = 1; k <= stages; ++k) rhs[k - 1] = std::pow(t.c[i], k) / k;
        t.a.row(i) = lu.solve(rhs).transpose();
    }
    t.b = t.a.row(stages - 1).transpose();
    return t;
}

namespace {

Mat radau_delta(const RadauTableau& t, cplx z) {
    const int s = t.stages;
    const Mat ones_bt = (RealVec::Ones(s) * t.b.transpose()).cast<cplx>();
    const Mat inner = t.a.cast<cplx>() + z / (1.0 - z) * ones_bt;
    return inner.partialPivLu().inverse();
}

Mat radau_stage_samples(const TimeFunction& g, const TimeGrid& grid, const RadauTableau& t) {
    Mat v(t.stages, grid.N);
    for (int n = 0; n < grid.N; ++n)
        for (int i = 0; i < t.stages; ++i) v(i, n) = g(grid.node(n) + t.c[i] * grid.h);
    return v;
}

long binomial(int n, int k) {
    long b = 1;
    for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
    return b;
}

// Exact weights for rational K: with P(zeta) = A + zeta 1b^T and
// Delta(z) = P(z/(1-z))^{-1}, multiplying den(Delta/h) W = num(Delta/h) by
// P^d (1-z)^d turns both sides into matrix polynomials in z of degree <= d,
// which gives a recurrence for the weights.
std::vector<Mat> radau_weights_exact(const RationalForm& rf, const RadauTableau& t,
                                     const TimeGrid& grid) {
    const int s = t.stages;
    const Mat a = t.a.cast<cplx>();
    const Mat e = (RealVec::Ones(s) * t.b.transpose()).cast<cplx>();
    const int d = static_cast<int>(std::max(rf.num.size(), rf.den.size())) - 1;

    auto zeta_poly = [&](const std::vector<cplx>& c) {
        // sum_k c_k h^{-k} P(zeta)^{d-k} as zeta-coefficient matrices
        std::vector<Mat> acc(d + 1, Mat::Zero(s, s));
        for (int k = 0; k < static_cast<int>(c.size()); ++k) {
            std::vector<Mat> power{Mat::Identity(s, s)};
            for (int m = 0; m < d - k; ++m) {
                std::vector<Mat> next(power.size() + 1, Mat::Zero(s, s));
                for (size_t q = 0; q < power.size(); ++q) {
                    next[q] += power[q] * a;
                    next[q + 1] += power[q] * e;
                }
                power = std::move(next);
            }
            const cplx hk = std::pow(cplx(grid.h), -k);
            for (size_t q = 0; q < power.size(); ++q) acc[q] += c[k] * hk * power[q];
        }
        return acc;
    };
    auto to_z_poly = [&](const std::vector<Mat>& zc) {
        // zeta^m (1-z)^d -> z^m (1-z)^{d-m}, expanded binomially
        std::vector<Mat> out(d + 1, Mat::Zero(s, s));
        for (int m = 0; m <= d; ++m)
            for (int i = 0; i + m <= d; ++i)
                out[m + i] += double((i % 2 == 0 ? 1 : -1) * binomial(d - m, i)) * zc[m];
        return out;
    };

    const std::vector<Mat> qpoly = to_z_poly(zeta_poly(rf.den));
    const std::vector<Mat> rpoly = to_z_poly(zeta_poly(rf.num));
    Eigen::PartialPivLU<Mat> q0(qpoly[0]);
    if (!q0.inverse().allFinite())
        throw NumericError("radau_cq_weights: singular denominator block");

    std::vector<Mat> w(grid.N + 1);
    for (int n = 0; n <= grid.N; ++n) {
        Mat rhs = n < static_cast<int>(rpoly.size()) ? rpoly[n] : Mat::Zero(s, s);
        for (int q = 1; q <= std::min<int>(n, d); ++q) rhs -= qpoly[q] * w[n - q];
        w[n] = q0.solve(rhs);
    }
    return w;
}

}  // namespace

RadauWeights radau_cq_weights(const TransferFunction& K, const TimeGrid& grid,
                              std::optional<double> r) {
    const RadauTableau t = radau_tableau(3);
    const double radius = r.value_or(default_radius(grid.N));
    if (K.sigma > 0.0 && (1.0 - radius * radius) / (2.0 * grid.h) <= K.sigma)
        throw AbscissaError("radau_cq_weights: inadmissible h for sigma=" +
                                std::to_string(K.sigma),
                            (1.0 - radius * radius) / (2.0 * K.sigma));
    if (K.rational) {
        RadauWeights w;
        w.grid = grid;
        w.radius = radius;
        w.weights = radau_weights_exact(*K.rational, t, grid);
        return w;
    }
    const int M = grid.N + 1;
    std::vector<Mat> samples(M);
    parallel_for(M, [&](int l) {
        const cplx z = radius * std::polar(1.0, -2.0 * std::numbers::pi * l / M);
        samples[l] = matrix_function_dense(K, radau_delta(t, z) / grid.h);
    });

    RadauWeights w;
    w.grid = grid;
    w.radius = radius;
    w.weights.assign(M, Mat::Zero(t.stages, t.stages));
    std::vector<cplx> line(M);
    for (int i = 0; i < t.stages; ++i) {
        for (int j = 0; j < t.stages; ++j) {
            for (int l = 0; l < M; ++l) line[l] = samples[l](i, j);
            const std::vector<cplx> y = dft(line, +1);
            double rp = 1.0;
            for (int n = 0; n < M; ++n) {
                w.weights[n](i, j) = y[n] / (rp * M);
                rp *= radius;
            }
        }
    }
    return w;
}

RadauStageSignal radau_cq_apply(const TransferFunction& K, const TimeFunction& g,
                                const TimeGrid& grid) {
    const RadauTableau t = radau_tableau(3);
    const RadauWeights w = radau_cq_weights(K, grid);
    const Mat gs = radau_stage_samples(g, grid, t);
    RadauStageSignal out;
    out.grid = grid;
    out.values = Mat::Zero(t.stages, grid.N);
    for (int n = 0; n < grid.N; ++n)
        for (int j = 0; j <= n; ++j) out.values.col(n) += w.weights[j] * gs.col(n - j);
    return out;
}

RadauStageSignal radau_cq_solve(const TransferFunction& K, const RadauStageSignal& rhs) {
    const RadauTableau t = radau_tableau(3);
    const TimeGrid& grid = rhs.grid;
    const int N = grid.N;
    const int M = N + 1;
    const double radius = default_radius(N);

    Mat hat(t.stages, M);
    std::vector<cplx> line(M);
    for (int i = 0; i < t.stages; ++i) {
        double rp = 1.0;
        for (int n = 0; n < M; ++n) {
            line[n] = (n < N) ? rhs.values(i, n) * rp : cplx(0.0);
            rp *= radius;
        }
        const std::vector<cplx> y = dft(line, -1);
        for (int l = 0; l < M; ++l) hat(i, l) = y[l];
    }

    Mat sol(t.stages, M);
    parallel_for(M, [&](int l) {
        const cplx z = radius * std::polar(1.0, -2.0 * std::numbers::pi * l / M);
        const Mat a = matrix_function_dense(K, radau_delta(t, z) / grid.h);
        sol.col(l) = a.partialPivLu().solve(hat.col(l));
        if (!sol.col(l).allFinite())
            throw NumericError("radau_cq_solve: singular system at sample l=" +
                               std::to_string(l));
    });

    RadauStageSignal out;
    out.grid = grid;
    out.values.resize(t.stages, N);
    for (int i = 0; i < t.stages; ++i) {
        for (int l = 0; l < M; ++l) line[l] = sol(i, l);
        const std::vector<cplx> y = dft(line, +1);
        double rp = 1.0;
        for (int n = 0; n < N; ++n) {
            out.values(i, n) = y[n] / (rp * M);
            rp *= radius;
        }
    }
    return out;
}

PiecewisePolynomial radau_to_piecewise(const RadauStageSignal& s) {
    const int stages = static_cast<int>(s.values.rows());
    const RadauTableau t = radau_tableau(stages);
    const int p = stages - 1;
    RealMat phi(stages, stages);
    for (int i = 0; i < stages; ++i) phi.row(i) = basis_eval(p, t.c[i]).transpose();
    Eigen::PartialPivLU<Mat> lu(phi.cast<cplx>());
    TimeGrid grid(s.grid.h, s.grid.N, p);
    Mat coeffs(stages, s.grid.N);
    for (int n = 0; n < s.grid.N; ++n) coeffs.col(n) = lu.solve(s.values.col(n));
    return PiecewisePolynomial(grid, std::move(coeffs));
}

double radau_equivalence_check(const TimeFunction& g, const TimeGrid& grid,
                               const TransferFunction& K) {
    if (grid.p != 2)
        throw ContractError("radau_equivalence_check: needs p = 2 (3 Radau nodes)");
    const RadauTableau t = radau_tableau(3);

    // Radau interpolant of g as a p=2 signal
    RadauStageSignal gs;
    gs.grid = grid;
    gs.values = radau_stage_samples(g, grid, t);
    const PiecewisePolynomial gtilde = radau_to_piecewise(gs);

    const PiecewisePolynomial dg_out = apply(K, gtilde);
    const RadauStageSignal rk_out = radau_cq_apply(K, g, grid);

    RealMat phi(3, 3);
    for (int i = 0; i < 3; ++i) phi.row(i) = basis_eval(2, t.c[i]).transpose();
    double dev = 0.0;
    for (int n = 0; n < grid.N; ++n) {
        const Vec at_nodes = phi.cast<cplx>() * dg_out.coeffs.col(n);
        dev = std::max(dev, (at_nodes - rk_out.values.col(n)).cwiseAbs().maxCoeff());
    }
    return dev;
}

StabilityRatios stability_probe(const Mat& a, const VectorTimeFunction& f,
                                const TimeGrid& grid) {
    const double skew = (a + a.adjoint()).cwiseAbs().maxCoeff();
    if (skew > 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()))
        throw ContractError("stability_probe: A is not skew-Hermitian (defect " +
                            std::to_string(skew) + ")");
    const int m = static_cast<int>(a.rows());
    LinearSystem sys{a, f, "stability"};
    const std::vector<PiecewisePolynomial> u = ode_solve(sys, grid, ForcingProjection::L2);

    const double tstar = std::max(grid.h * std::ceil(grid.T() / grid.h), 1.0);
    const QuadRule rule = gauss_legendre(std::max(32, 2 * grid.p + 8));

    // int_0^{t*} ||f||^2 over ceil(t*/h) elements
    const int nf = static_cast<int>(std::ceil(tstar / grid.h - 1e-12));
    double fint = 0.0;
    for (int n = 0; n < nf; ++n)
        for (int q = 0; q < rule.size(); ++q)
            fint += rule.weights[q] * grid.h *
                    f(grid.node(n) + grid.h * rule.nodes[q]).squaredNorm();
    if (fint == 0.0) return {};

    double nodal = 0.0;
    for (int n = 1; n <= grid.N; ++n) {
        double s = 0.0;
        for (int k = 0; k < m; ++k) s += std::norm(u[k].node_value(n));
        nodal = std::max(nodal, s);
    }

    double l2 = 0.0;
    for (int n = 0; n < grid.N; ++n)
        for (int q = 0; q < rule.size(); ++q) {
            const RealVec phi = basis_eval(grid.p, rule.nodes[q]);
            double s = 0.0;
            for (int k = 0; k < m; ++k) {
                cplx v = 0.0;
                for (int j = 0; j <= grid.p; ++j) v += u[k].coeffs(j, n) * phi[j];
                s += std::norm(v);
            }
            l2 += rule.weights[q] * grid.h * s;
        }

    double pw = 0.0;
    const int dense = 8 * (grid.p + 1);
    for (int n = 0; n < grid.N; ++n)
        for (int i = 1; i <= dense; ++i) {
            const RealVec phi = basis_eval(grid.p, static_cast<double>(i) / dense);
            double s = 0.0;
            for (int k = 0; k < m; ++k) {
                cplx v = 0.0;
                for (int j = 0; j <= grid.p; ++j) v += u[k].coeffs(j, n) * phi[j];
                s += std::norm(v);
            }
            pw = std::max(pw, s);
        }

    StabilityRatios r;
    r.nodal = nodal / (tstar * fint);
    r.l2 = l2 / (tstar * tstar * fint);
    r.pointwise = pw / (tstar * fint);
    return r;
}

}  // namespace pcq
