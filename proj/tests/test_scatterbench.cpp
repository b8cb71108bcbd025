#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pcq/scatterbench.hpp"
#include "test_util.hpp"

using namespace pcq;

namespace {

StudyConfig small_study(WindowKind kind) {
    StudyConfig c;
    c.window = kind;
    c.T = 4.0;
    c.N = 16;
    c.p_list = {2, 6, 12};
    c.p_ref = 16;
    return c;
}

}  // namespace

TEST_CASE("window normalization and support") {
    const WindowFunction w1 = make_window(WindowKind::Gevrey, 1.0);
    CHECK(w1.c == doctest::Approx(std::exp(4.0)).epsilon(1e-15));
    CHECK(window_eval(w1, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(window_eval(w1, 0.25) == doctest::Approx(0.26359713811572677).epsilon(1e-13));
    CHECK(window_eval(w1, -0.1) == 0.0);
    CHECK(window_eval(w1, 0.0) == 0.0);
    CHECK(window_eval(w1, 1.0) == 0.0);
    CHECK(window_eval(w1, 1e-8) >= 0.0);  // graceful underflow near the edge

    const WindowFunction w2 = make_window(WindowKind::Poly);
    CHECK(window_eval(w2, 0.5) == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
    CHECK(window_eval(w2, 1.0) == 0.0);
}

TEST_CASE("dirichlet data vanishes before the lag") {
    BenchmarkProblem prob;
    prob.window = make_window(WindowKind::Gevrey);
    prob.grid = TimeGrid(0.25, 16, 4);
    const TimeFunction g = dirichlet_data(prob);
    for (double t : {0.0, 0.2, 0.5}) CHECK(std::abs(g(t)) == 0.0);
    CHECK(std::abs(g(1.0)) > 0.1);  // mid-window the carrier is active
    CHECK(std::abs(g(2.0)) == 0.0); // past the support
}

TEST_CASE("zero data yields the zero density") {
    BenchmarkProblem prob;
    prob.window = make_window(WindowKind::Gevrey);
    prob.window.c = 0.0;  // switches the data off entirely
    prob.grid = TimeGrid(0.25, 16, 4);
    const PiecewisePolynomial lam = solve_sphere_dirichlet(prob);
    CHECK(lam.coeffs.cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("density is causal: quiet before the lag") {
    for (SolverKind solver : {SolverKind::AllAtOnce, SolverKind::Marching}) {
        BenchmarkProblem prob;
        prob.window = make_window(WindowKind::Gevrey);
        prob.grid = TimeGrid(0.25, 16, 6);
        prob.solver = solver;
        const PiecewisePolynomial lam = solve_sphere_dirichlet(prob);
        const double scale = lam.coeffs.cwiseAbs().maxCoeff();
        // elements fully before t_lag = 0.5: the first two at h = 0.25
        for (int n = 0; n < 2; ++n)
            CHECK(lam.coeffs.col(n).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }
}

TEST_CASE("relative error normalization and sampling robustness") {
    BenchmarkProblem prob;
    prob.window = make_window(WindowKind::Gevrey);
    prob.grid = TimeGrid(0.25, 16, 8);
    const PiecewisePolynomial lam = solve_sphere_dirichlet(prob);
    CHECK(relative_error(lam, lam) == 0.0);

    PiecewisePolynomial doubled(lam.grid, 2.0 * lam.coeffs);
    CHECK(relative_error(doubled, lam) == doctest::Approx(1.0).epsilon(1e-12));

    prob.grid = TimeGrid(0.25, 16, 4);
    const PiecewisePolynomial coarse = solve_sphere_dirichlet(prob);
    const double e1024 = relative_error(coarse, lam, 1024);
    const double e2048 = relative_error(coarse, lam, 2048);
    CHECK(std::abs(e1024 - e2048) <= 0.05 * e1024);
}

TEST_CASE("error decreases monotonically through the sweep") {
    BenchmarkProblem ref;
    ref.window = make_window(WindowKind::Gevrey);
    ref.grid = TimeGrid(0.25, 16, 24);
    const PiecewisePolynomial reference = solve_sphere_dirichlet(ref);

    BenchmarkProblem prob = ref;
    prob.grid = TimeGrid(0.25, 16, 4);
    const double e4 = relative_error(solve_sphere_dirichlet(prob), reference);
    prob.grid = TimeGrid(0.25, 16, 12);
    const double e12 = relative_error(solve_sphere_dirichlet(prob), reference);
    CHECK(e4 > e12);
    CHECK(e12 < 1e-4);
}

TEST_CASE("convergence study emits one record per degree plus the baseline") {
    StudyConfig config = small_study(WindowKind::Gevrey);
    config.radau_match_p = 6;
    const std::vector<ConvergenceRecord> records = convergence_study(config);
    REQUIRE(records.size() == 4);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(records[i].p == config.p_list[i]);
        CHECK(records[i].solver == "allatonce");
        CHECK(records[i].p_ref == 16);
        CHECK(std::isfinite(records[i].rel_error));
        CHECK(records[i].rel_error >= 0.0);
        CHECK(records[i].diagnostic.empty());
    }
    CHECK(records[1].rel_error < records[0].rel_error);
    CHECK(records[2].rel_error < records[1].rel_error);

    const ConvergenceRecord& radau = records.back();
    CHECK(radau.solver == "radau3");
    CHECK(radau.N == (17 * 7) / 3 - 1);
    CHECK(std::isfinite(radau.rel_error));
    // the DG run at matched operator applications sits well below the
    // fixed-order baseline (quantitatively far beyond the naive expectation;
    // the study records both so the standing is visible in the data)
    CHECK(records[2].rel_error < radau.rel_error);
    CHECK(radau.rel_error < 0.1);
}

TEST_CASE("a failing sweep entry yields a diagnostic record, not an abort") {
    StudyConfig config = small_study(WindowKind::Gevrey);
    config.p_list = {2, 40};  // 40 exceeds p_ref
    CHECK_THROWS_AS(convergence_study(config), ContractError);

    StudyConfig broken = small_study(WindowKind::Gevrey);
    broken.solver = SolverKind::Marching;
    broken.stab_points = -1;  // every marching entry fails, the sweep must not
    const std::vector<ConvergenceRecord> recs = convergence_study(broken);
    REQUIRE(recs.size() == 3);
    for (const ConvergenceRecord& r : recs) {
        CHECK(std::isnan(r.rel_error));
        CHECK(!r.diagnostic.empty());
    }
}

TEST_CASE("solver choice does not move the study errors") {
    StudyConfig am = small_study(WindowKind::Gevrey);
    am.p_list = {6};
    const double e_aao = convergence_study(am)[0].rel_error;
    am.solver = SolverKind::Marching;
    am.stab_points = 4;
    const double e_mar = convergence_study(am)[0].rel_error;
    CHECK(std::abs(e_aao - e_mar) <= 0.01 * e_aao);
}
