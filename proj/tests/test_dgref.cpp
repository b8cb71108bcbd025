#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pcq/dgref.hpp"
#include "test_util.hpp"

using namespace pcq;

TEST_CASE("dg solve integrates constants exactly for p >= 1") {
    const TimeGrid grid(0.25, 8, 2);
    const PiecewisePolynomial y = ode_solve(0.0, [](double) { return cplx(1.0); }, grid);
    for (int n = 1; n <= grid.N; ++n)
        CHECK(std::abs(y.node_value(n) - grid.node(n)) <= 1e-13);
}

TEST_CASE("dg solve of the homogeneous problem stays zero") {
    const TimeGrid grid(0.25, 8, 3);
    const PiecewisePolynomial y = ode_solve(0.0, [](double) { return cplx(0.0); }, grid);
    CHECK(y.coeffs.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dg solve against the closed-form solution of y' = -y + sin t") {
    const TimeGrid grid(0.5, 8, 6);
    const PiecewisePolynomial y =
        ode_solve(-1.0, [](double t) { return cplx(std::sin(t)); }, grid);
    const auto exact = [](double t) { return (std::sin(t) - std::cos(t) + std::exp(-t)) / 2.0; };
    for (int n = 1; n <= grid.N; ++n)
        CHECK(std::abs(y.node_value(n) - exact(grid.node(n))) <= 1e-8);
}

TEST_CASE("discrete integral identity: zero-coefficient solve equals projected antiderivative") {
    auto gen = testutil::rng();
    for (int p : {1, 3, 6}) {
        const TimeGrid grid(0.25, 8, p);
        Mat c(p + 1, grid.N);
        for (int n = 0; n < grid.N; ++n)
            for (int j = 0; j <= p; ++j)
                c(j, n) = cplx(testutil::uniform(gen, -1, 1), testutil::uniform(gen, -1, 1));
        const PiecewisePolynomial psi(grid, c);
        const PiecewisePolynomial y =
            ode_solve(0.0, [&psi](double t) { return psi.eval(t); }, grid);
        const PiecewisePolynomial oracle =
            interpolate([&psi](double t) { return integral_value(psi, t); }, grid);
        CHECK((y.coeffs - oracle.coeffs).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("cq resolvent application coincides with the dg solve") {
    auto gen = testutil::rng();
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int p = static_cast<int>(testutil::uniform(gen, 0.0, 8.999));
        const int N = 4 + static_cast<int>(testutil::uniform(gen, 0.0, 28.999));
        const TimeGrid grid(testutil::uniform(gen, 0.1, 0.6), N, p);
        const cplx zeta(-testutil::uniform(gen, 0.0, 2.0), testutil::uniform(gen, -2.0, 2.0));
        const double a1 = testutil::uniform(gen, -1, 1), a2 = testutil::uniform(gen, -1, 1);
        const auto g = [a1, a2](double t) {
            return cplx(a1 * std::sin(1.3 * t) + a2 * t * std::cos(0.7 * t));
        };
        const PiecewisePolynomial viaw = apply(sym_resolvent(zeta), g, grid);
        const PiecewisePolynomial viadg = ode_solve(zeta, g, grid);
        worst = std::max(worst, (viaw.coeffs - viadg.coeffs).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("jumps of the dg solution decay with the degree") {
    const auto g = [](double t) { return cplx(std::sin(2.0 * t)); };
    double prev = 1e300;
    for (int p = 1; p <= 8; ++p) {
        const TimeGrid grid(0.5, 8, p);
        const PiecewisePolynomial y = ode_solve(cplx(0.0, 1.0), g, grid);
        double jump = 0.0;
        const RealVec phi0 = basis_eval(p, 0.0);
        for (int n = 1; n < grid.N; ++n) {
            cplx right = 0.0;
            for (int j = 0; j <= p; ++j) right += y.coeffs(j, n) * phi0[j];
            jump = std::max(jump, std::abs(right - y.node_value(n)));
        }
        CHECK(jump <= prev + 1e-13);
        prev = jump;
    }
    CHECK(prev <= 1e-6);  // spectrally small by p = 8
}

TEST_CASE("system solve matches the scalar solve on a diagonal system") {
    const TimeGrid grid(0.25, 8, 3);
    Mat a(2, 2);
    a << cplx(0, 1), 0.0, 0.0, cplx(0, -2);
    LinearSystem sys{a,
                     [](double t) {
                         Vec v(2);
                         v << std::sin(t), std::cos(t);
                         return v;
                     },
                     "diag"};
    const std::vector<PiecewisePolynomial> u = ode_solve(sys, grid);
    const PiecewisePolynomial u0 =
        ode_solve(cplx(0, 1), [](double t) { return cplx(std::sin(t)); }, grid);
    const PiecewisePolynomial u1 =
        ode_solve(cplx(0, -2), [](double t) { return cplx(std::cos(t)); }, grid);
    CHECK((u[0].coeffs - u0.coeffs).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((u[1].coeffs - u1.coeffs).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("radau tableau from the collocation conditions") {
    const RadauTableau t = radau_tableau(3);
    const double s6 = std::sqrt(6.0);
    CHECK(t.c[0] == doctest::Approx((4.0 - s6) / 10.0).epsilon(1e-14));
    CHECK(t.c[1] == doctest::Approx((4.0 + s6) / 10.0).epsilon(1e-14));
    CHECK(t.c[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.a(0, 0) == doctest::Approx((88.0 - 7.0 * s6) / 360.0).epsilon(1e-13));
    CHECK(t.a(2, 2) == doctest::Approx(1.0 / 9.0).epsilon(1e-13));
    CHECK((t.b - t.a.row(2).transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(t.b.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(t.b.dot(t.c) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("radau cq of the identity symbol is the stage identity") {
    const TimeGrid grid(0.25, 8, 2);
    const RadauWeights w = radau_cq_weights(sym_identity(), grid);
    CHECK((w.weights[0] - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-13);
    for (int n = 1; n <= grid.N; ++n)
        CHECK(w.weights[n].cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("radau discrete integral of one gives the stage times") {
    const TimeGrid grid(0.25, 16, 2);
    const RadauTableau t = radau_tableau(3);
    const RadauStageSignal u =
        radau_cq_apply(sym_s_inv(), [](double) { return cplx(1.0); }, grid);
    for (int n = 0; n < grid.N; ++n)
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(u.values(i, n) - (grid.node(n) + t.c[i] * grid.h)) <= 1e-12);
}

TEST_CASE("radau sampled weights agree with the exact recurrence") {
    const TimeGrid grid(0.25, 12, 2);
    const TransferFunction k = sym_resolvent(cplx(-1.0, 0.3));
    const RadauWeights exact = radau_cq_weights(k, grid);
    TransferFunction opaque = k;
    opaque.rational.reset();
    const RadauWeights sampled = radau_cq_weights(opaque, grid);
    double worst = 0.0;
    for (int n = 0; n <= grid.N; ++n)
        worst = std::max(worst, (exact.weights[n] - sampled.weights[n]).cwiseAbs().maxCoeff());
    CHECK(worst <= 1e-7);
}

TEST_CASE("radau nodal order on y' = -y + sin t") {
    // solve via stage weights of the resolvent; nodal value = last stage (c_3 = 1)
    const auto exact = [](double t) { return (std::sin(t) - std::cos(t) + std::exp(-t)) / 2.0; };
    std::vector<double> errs;
    for (int N : {8, 16, 32, 64}) {
        const TimeGrid grid(4.0 / N, N, 2);
        const RadauStageSignal y = radau_cq_apply(
            sym_resolvent(-1.0), [](double t) { return cplx(std::sin(t)); }, grid);
        double err = 0.0;
        for (int n = 0; n < N; ++n)
            err = std::max(err, std::abs(y.values(2, n) - exact(grid.node(n + 1))));
        errs.push_back(err);
    }
    for (size_t i = 0; i + 1 < errs.size(); ++i) {
        const double rate = std::log2(errs[i] / errs[i + 1]);
        CHECK(rate >= 4.7);
    }
}

TEST_CASE("p=2 dg-cq on radau-interpolated data matches radau cq at the nodes") {
    const TimeGrid grid(0.25, 16, 2);
    const auto g = [](double t) { return cplx(std::sin(2.0 * t)); };
    CHECK(radau_equivalence_check(g, grid, sym_identity()) <= 1e-10);
    CHECK(radau_equivalence_check(g, grid, sym_resolvent(-1.0)) <= 1e-9);
    CHECK(radau_equivalence_check(g, grid, sphere_sV()) <= 1e-8);
    CHECK_THROWS_AS(radau_equivalence_check(g, TimeGrid(0.25, 16, 3), sym_identity()),
                    ContractError);
}

TEST_CASE("stability probe rejects non-skew systems and zero forcing is silent") {
    Mat bad(2, 2);
    bad << 1.0, 0.0, 0.0, 1.0;
    const TimeGrid grid(0.5, 4, 2);
    CHECK_THROWS_AS(stability_probe(bad, [](double) { return Vec(Vec::Zero(2)); }, grid),
                    ContractError);

    Mat rot(2, 2);
    rot << 0.0, 1.0, -1.0, 0.0;
    const StabilityRatios rz =
        stability_probe(rot, [](double) { return Vec(Vec::Zero(2)); }, grid);
    CHECK(rz.nodal == 0.0);
    CHECK(rz.l2 == 0.0);
    CHECK(rz.pointwise == 0.0);
}

TEST_CASE("stability ratios stay uniformly bounded over the sweep") {
    Mat rot(2, 2);
    rot << 0.0, 1.0, -1.0, 0.0;
    const auto f = [](double t) {
        Vec v(2);
        v << std::sin(t), 0.0;
        return v;
    };
    double max_nodal = 0.0, max_l2 = 0.0;
    std::vector<double> pw;
    const std::vector<int> ps{1, 2, 4, 8};
    for (int p : ps) {
        double worst_pw = 0.0;
        for (double h : {0.5, 0.25, 0.125}) {
            const int N = static_cast<int>(std::llround(8.0 / h));
            const StabilityRatios r = stability_probe(rot, f, TimeGrid(h, N, p));
            max_nodal = std::max(max_nodal, r.nodal);
            max_l2 = std::max(max_l2, r.l2);
            worst_pw = std::max(worst_pw, r.pointwise);
        }
        pw.push_back(worst_pw);
    }
    // regression bounds, measured once and frozen
    CHECK(max_nodal <= 0.6);
    CHECK(max_l2 <= 0.2);
    // pointwise growth exponent in p
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < ps.size(); ++i) {
        const double x = std::log(double(ps[i])), y = std::log(pw[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double slope = (ps.size() * sxy - sx * sy) / (ps.size() * sxx - sx * sx);
    CHECK(slope <= 2.3);
}
