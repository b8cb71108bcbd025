#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pcq/symbols.hpp"
#include "test_util.hpp"

using namespace pcq;

TEST_CASE("basic symbols evaluate pointwise") {
    CHECK(sym_identity()(cplx(2, 3)) == cplx(1.0));
    CHECK(sym_s()(cplx(2, 3)) == cplx(2, 3));
    CHECK(std::abs(sym_s_inv()(cplx(2)) - 0.5) <= 1e-16);
    CHECK(std::abs(sym_resolvent(-1.0)(cplx(1.0)) - 0.5) <= 1e-16);
    CHECK_THROWS_AS(sym_resolvent(cplx(0.1, 0.0)), ContractError);
}

TEST_CASE("sphere single-layer eigenvalue") {
    const TransferFunction v = sphere_V();
    CHECK(std::abs(v(1.0) - 0.43233235838169365) <= 1e-15);
    CHECK(std::abs(v(10.0) - 0.049999999896942319) <= 1e-15);
    // removable singularity: series branch tends to 1
    CHECK(std::abs(v(1e-9) - 1.0) <= 1e-8);
    CHECK(v.mu == -1.0);
    CHECK(v.sigma == 0.0);
}

TEST_CASE("sphere double-layer combination") {
    const TransferFunction k = sphere_half_plus_K();
    CHECK(std::abs(k(1.0) - std::exp(-2.0)) <= 1e-15);
    // s -> 0 limit vanishes; cross-check tiny arguments against small ones
    const cplx near = k(1e-6), small = k(1e-3);
    CHECK(std::abs(near) <= 1e-11);
    CHECK(std::abs(small) <= 1e-5);
    CHECK(std::abs(near.real() / (1e-12) - small.real() / (1e-6)) <= 1e-2);

    const TransferFunction mk = sphere_mhalf_plus_K();
    CHECK(std::abs(mk(1.0) - (std::exp(-2.0) - 1.0)) <= 1e-15);
    CHECK(std::abs(mk(1.0) - (k(1.0) - 1.0)) <= 1e-15);
}

TEST_CASE("series and closed-form branches agree around the switch radius") {
    auto gen = testutil::rng();
    const TransferFunction v = sphere_V();
    const TransferFunction k = sphere_half_plus_K();
    for (int trial = 0; trial < 200; ++trial) {
        const double rho = testutil::uniform(gen, 0.005, 0.02);
        const double th = testutil::uniform(gen, -1.5, 1.5);
        const cplx s = std::polar(rho, th);
        const cplx closed_v = (1.0 - std::exp(-2.0 * s)) / (2.0 * s);
        CHECK(std::abs(v(s) - closed_v) <= 1e-12);
        const cplx closed_k = (s - 1.0 + (s + 1.0) * std::exp(-2.0 * s)) / (2.0 * s);
        CHECK(std::abs(k(s) - closed_k) <= 1e-12);
    }
}

TEST_CASE("products and scalings compose values and metadata") {
    const TransferFunction prod = sym_product(sym_s(), sym_s_inv());
    auto gen = testutil::rng();
    for (int trial = 0; trial < 20; ++trial) {
        const cplx s = cplx(testutil::uniform(gen, 0.1, 3.0), testutil::uniform(gen, -3.0, 3.0));
        CHECK(std::abs(prod(s) - 1.0) <= 1e-14);
    }
    CHECK(prod.mu == 0.0);
    CHECK(prod.sigma == 0.0);
    CHECK(prod.rational.has_value());

    const TransferFunction sv = sym_product(sym_s(), sphere_V());
    CHECK(std::abs(sv(1.0) - 0.43233235838169365) <= 1e-15);
    CHECK(sv.mu == 0.0);
    CHECK_FALSE(sv.rational.has_value());

    CHECK(std::abs(sym_scale(2.0, sym_s())(3.0) - 6.0) <= 1e-15);
}

TEST_CASE("the dedicated sV symbol matches the product") {
    const TransferFunction sv = sphere_sV();
    const TransferFunction prod = sym_product(sym_s(), sphere_V());
    for (double x : {0.003, 0.5, 2.0, 20.0})
        CHECK(std::abs(sv(x) - prod(x)) <= 1e-15);
}

TEST_CASE("analyticity smoke test by finite differences") {
    // Cauchy-Riemann residual of the sphere symbols right of Re = 0.1
    auto gen = testutil::rng();
    const double eps = 1e-6;
    for (const TransferFunction& f : {sphere_V(), sphere_half_plus_K(), sphere_sV()}) {
        for (int trial = 0; trial < 30; ++trial) {
            const cplx s(testutil::uniform(gen, 0.1, 4.0), testutil::uniform(gen, -4.0, 4.0));
            const cplx dx = (f(s + eps) - f(s - eps)) / (2.0 * eps);
            const cplx dy = (f(s + cplx(0, eps)) - f(s - cplx(0, eps))) / (2.0 * eps);
            CHECK(std::abs(dx - dy / cplx(0, 1)) <= 1e-6);
        }
    }
}

TEST_CASE("registry lookups") {
    CHECK(symbol_registry("s").label == "s");
    CHECK(symbol_registry("s_inv").label == "s_inv");
    CHECK(symbol_registry("sphereV").label == "sphereV");
    CHECK(symbol_registry("sV").label == "sV");
    CHECK(symbol_registry("mhalf_plus_K").label == "mhalf_plus_K");
    CHECK_THROWS_AS(symbol_registry("nope"), ContractError);
    CHECK(symbol_registry_labels().size() >= 5);
}
