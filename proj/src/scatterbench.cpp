#include "pcq/scatterbench.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "pcq/dgref.hpp"

namespace pcq {

WindowFunction make_window(WindowKind kind, double gamma) {
    if (kind == WindowKind::Gevrey && !(gamma > 0.0))
        throw ContractError("make_window: gamma must be positive");
    WindowFunction w;
    w.kind = kind;
    w.gamma = gamma;
    w.c = (kind == WindowKind::Gevrey) ? std::exp(std::pow(4.0, gamma)) : 1.0;
    return w;
}

double window_eval(const WindowFunction& w, double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    if (w.kind == WindowKind::Poly) return t * t * (1.0 - t) * (1.0 - t);
    // exp underflows to 0 near the endpoints, which is the intended limit
    return w.c * std::exp(-1.0 / std::pow(t * (1.0 - t), w.gamma));
}

TimeFunction dirichlet_data(const BenchmarkProblem& prob) {
    const double freq = prob.carrier_freq > 0.0 ? prob.carrier_freq : 4.0 * std::numbers::pi;
    const WindowFunction w = prob.window;
    const double lag = prob.t_lag;
    return [w, lag, freq](double t) -> cplx {
        return window_eval(w, t - lag) * std::sin(freq * (t - lag));
    };
}

PiecewisePolynomial solve_sphere_dirichlet(const BenchmarkProblem& prob) {
    const TimeFunction g = dirichlet_data(prob);
    const PiecewisePolynomial rhs = apply(sphere_mhalf_plus_K(), g, prob.grid);
    if (prob.solver == SolverKind::AllAtOnce)
        return solve_allatonce(sphere_sV(), rhs).solution;
    MarchingOptions opts;
    opts.stab_points = prob.stab_points;
    return solve_marching(sphere_sV(), rhs, opts).solution;
}

double relative_error(const PiecewisePolynomial& a, const PiecewisePolynomial& b,
                      int samples) {
    if (samples < 1) throw ContractError("relative_error: samples must be >= 1");
    if (std::abs(a.grid.T() - b.grid.T()) > 1e-12 * std::max(1.0, b.grid.T()))
        throw ContractError("relative_error: signals have different final times");
    const double T = b.grid.T();
    double num = 0.0, den = 0.0;
    for (int i = 1; i <= samples; ++i) {
        const double t = T * i / samples;
        const cplx va = a.eval(t), vb = b.eval(t);
        num = std::max(num, std::abs(va - vb));
        den = std::max(den, std::abs(vb));
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<ConvergenceRecord> convergence_study(const StudyConfig& config) {
    if (config.p_list.empty()) throw ContractError("convergence_study: empty p list");
    for (int p : config.p_list)
        if (p >= config.p_ref)
            throw ContractError("convergence_study: reference degree must exceed every swept p");

    const WindowFunction window = make_window(config.window, config.gamma);
    const double h = config.T / config.N;

    BenchmarkProblem ref_prob;
    ref_prob.window = window;
    ref_prob.grid = TimeGrid(h, config.N, config.p_ref);
    ref_prob.solver = SolverKind::AllAtOnce;
    const PiecewisePolynomial reference = solve_sphere_dirichlet(ref_prob);

    const std::string solver_label =
        config.solver == SolverKind::AllAtOnce
            ? "allatonce"
            : "marching" + std::to_string(config.stab_points);

    std::vector<ConvergenceRecord> records;
    for (int p : config.p_list) {
        ConvergenceRecord rec;
        rec.p = p;
        rec.h = h;
        rec.N = config.N;
        rec.T = config.T;
        rec.solver = solver_label;
        rec.p_ref = config.p_ref;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            BenchmarkProblem prob = ref_prob;
            prob.grid = TimeGrid(h, config.N, p);
            prob.solver = config.solver;
            prob.stab_points = config.stab_points;
            const PiecewisePolynomial lambda = solve_sphere_dirichlet(prob);
            rec.rel_error = relative_error(lambda, reference, config.samples);
        } catch (const std::exception& e) {
            rec.rel_error = std::numeric_limits<double>::quiet_NaN();
            rec.diagnostic = e.what();
        }
        rec.seconds = seconds_since(t0);
        records.push_back(std::move(rec));
    }

    if (config.radau_match_p) {
        // match scalar transfer-function evaluations: 3 (N_R + 1) = (N+1)(p+1)
        const int pm = *config.radau_match_p;
        const int nr = std::max(2, (config.N + 1) * (pm + 1) / 3 - 1);
        ConvergenceRecord rec;
        rec.p = 2;
        rec.h = config.T / nr;
        rec.N = nr;
        rec.T = config.T;
        rec.solver = "radau3";
        rec.p_ref = config.p_ref;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const TimeGrid rgrid(config.T / nr, nr, 2);
            BenchmarkProblem rprob;
            rprob.window = window;
            rprob.grid = rgrid;
            const TimeFunction g = dirichlet_data(rprob);
            const RadauStageSignal rhs = radau_cq_apply(sphere_mhalf_plus_K(), g, rgrid);
            const RadauStageSignal lam = radau_cq_solve(sphere_sV(), rhs);
            rec.rel_error = relative_error(radau_to_piecewise(lam), reference, config.samples);
        } catch (const std::exception& e) {
            rec.rel_error = std::numeric_limits<double>::quiet_NaN();
            rec.diagnostic = e.what();
        }
        rec.seconds = seconds_since(t0);
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace pcq
