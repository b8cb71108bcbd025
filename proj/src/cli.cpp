#include "pcq/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcq/cqengine.hpp"
#include "pcq/cqsymbol.hpp"
#include "pcq/csv.hpp"
#include "pcq/dgref.hpp"
#include "pcq/parallel.hpp"
#include "pcq/quadrature.hpp"
#include "pcq/symbols.hpp"

namespace pcq::cli {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::string& context) {
    if (!j.is_object()) throw ContractError(context + ": expected a JSON object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key))
            throw ContractError(context + ": unknown key '" + key + "'");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ContractError("cannot open output file '" + path + "'");
    return os;
}

json read_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ContractError("cannot open config file '" + path + "'");
    json j;
    is >> j;
    return j;
}

WindowKind parse_window(const std::string& name) {
    if (name == "w1" || name == "gevrey") return WindowKind::Gevrey;
    if (name == "w2" || name == "poly") return WindowKind::Poly;
    throw ContractError("unknown window '" + name + "' (use w1/gevrey or w2/poly)");
}

SolverKind parse_solver(const std::string& name) {
    if (name == "marching") return SolverKind::Marching;
    if (name == "allatonce") return SolverKind::AllAtOnce;
    throw ContractError("unknown solver '" + name + "' (use marching or allatonce)");
}

TimeFunction parse_forcing(const json& j) {
    require_keys(j, {"kind", "omega", "window", "gamma", "t_lag", "freq"}, "forcing");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "one") return [](double) -> cplx { return 1.0; };
    if (kind == "t") return [](double t) -> cplx { return t; };
    if (kind == "sin") {
        const double omega = j.value("omega", 1.0);
        return [omega](double t) -> cplx { return std::sin(omega * t); };
    }
    if (kind == "windowed_sine") {
        const WindowFunction w =
            make_window(parse_window(j.value("window", std::string("w1"))),
                        j.value("gamma", 1.0));
        const double lag = j.value("t_lag", 0.5);
        const double freq = j.value("freq", 4.0 * std::numbers::pi);
        return [w, lag, freq](double t) -> cplx {
            return window_eval(w, t - lag) * std::sin(freq * (t - lag));
        };
    }
    throw ContractError("unknown forcing kind '" + kind + "'");
}

}  // namespace

StudyConfig parse_study_config(const std::string& text) {
    const json j = json::parse(text);
    require_keys(j,
                 {"window", "gamma", "T", "N", "p_list", "p_ref", "solver",
                  "stab_points", "samples", "radau_match_p"},
                 "study config");
    StudyConfig c;
    c.window = parse_window(j.value("window", std::string("w1")));
    c.gamma = j.value("gamma", 1.0);
    c.T = j.value("T", 4.0);
    c.N = j.value("N", 16);
    c.p_list = j.at("p_list").get<std::vector<int>>();
    c.p_ref = j.value("p_ref", 24);
    c.solver = parse_solver(j.value("solver", std::string("allatonce")));
    c.stab_points = j.value("stab_points", 4);
    c.samples = j.value("samples", 1024);
    if (j.contains("radau_match_p")) c.radau_match_p = j.at("radau_match_p").get<int>();
    return c;
}

std::string study_config_to_json(const StudyConfig& c) {
    json j;
    j["window"] = c.window == WindowKind::Gevrey ? "w1" : "w2";
    j["gamma"] = c.gamma;
    j["T"] = c.T;
    j["N"] = c.N;
    j["p_list"] = c.p_list;
    j["p_ref"] = c.p_ref;
    j["solver"] = c.solver == SolverKind::AllAtOnce ? "allatonce" : "marching";
    j["stab_points"] = c.stab_points;
    j["samples"] = c.samples;
    if (c.radau_match_p) j["radau_match_p"] = *c.radau_match_p;
    return j.dump(2);
}

int run_spectrum(const SpectrumOptions& opts) {
    if (opts.out.empty()) throw ContractError("spectrum: --out is required");
    const double h = opts.T / opts.N;
    const double r = opts.r.value_or(default_radius(opts.N));
    const int M = opts.N + 1;

    std::vector<csv::SpectrumRow> rows, radau_rows;
    for (int p : opts.p_list) {
        for (int l = 0; l < M; ++l) {
            const cplx z = r * std::polar(1.0, -2.0 * std::numbers::pi * l / M);
            try {
                const SpectrumResult s = spectrum(delta(p, z));
                for (const cplx lam : s.eigenvalues) {
                    const cplx scaled = lam / h;
                    if (opts.max_re && scaled.real() >= *opts.max_re) continue;
                    rows.push_back({p, z, scaled});
                }
            } catch (const std::exception& e) {
                rows.push_back({p, z, cplx(std::nan(""), std::nan(""))});
                std::cerr << "spectrum: p=" << p << " l=" << l << ": " << e.what() << "\n";
            }
        }
    }
    if (opts.radau) {
        const RadauTableau t = radau_tableau(3);
        for (int l = 0; l < M; ++l) {
            const cplx z = r * std::polar(1.0, -2.0 * std::numbers::pi * l / M);
            const Mat ones_bt = (RealVec::Ones(3) * t.b.transpose()).cast<cplx>();
            const Mat inner = t.a.cast<cplx>() + z / (1.0 - z) * ones_bt;
            Eigen::ComplexEigenSolver<Mat> es(inner.partialPivLu().inverse() / h, false);
            for (int i = 0; i < 3; ++i) {
                const cplx lam = es.eigenvalues()[i];
                if (opts.max_re && lam.real() >= *opts.max_re) continue;
                radau_rows.push_back({2, z, lam});
            }
        }
    }

    auto os = open_out(opts.out);
    csv::write_spectrum(os, rows);
    if (opts.radau) {
        std::string path = opts.out;
        const auto dot = path.rfind(".csv");
        path = (dot == std::string::npos) ? path + "_radau.csv"
                                          : path.substr(0, dot) + "_radau.csv";
        auto os2 = open_out(path);
        csv::write_spectrum(os2, radau_rows);
    }
    return 0;
}

int run_weights(const WeightsOptions& opts) {
    if (opts.out.empty()) throw ContractError("weights: --out is required");
    const TransferFunction K = symbol_registry(opts.symbol);
    const TimeGrid grid(opts.h, opts.N, opts.p);
    const ConvolutionWeights w = compute_weights(K, grid, opts.r);
    const double check = weights_series_error(w, K);

    auto os = open_out(opts.out);
    csv::write_weights(os, w);

    json meta;
    meta["symbol"] = opts.symbol;
    meta["p"] = opts.p;
    meta["h"] = opts.h;
    meta["N"] = opts.N;
    meta["radius"] = w.radius;
    meta["exact_path"] = w.exact;
    meta["series_check_error"] = check;
    std::vector<double> norms;
    for (const Mat& wn : w.weights) norms.push_back(wn.cwiseAbs().maxCoeff());
    meta["weight_norms"] = norms;
    auto js = open_out(opts.out + ".json");
    js << meta.dump(2) << "\n";

    if (!(check < 1e-6)) {
        std::cerr << "weights: series round-trip check failed: " << check << "\n";
        return 1;
    }
    return 0;
}

int run_ode(const OdeOptions& opts) {
    if (opts.out.empty()) throw ContractError("ode: --out is required");
    const json j = read_config(opts.config);
    require_keys(j, {"zeta_re", "zeta_im", "p", "h", "N", "forcing"}, "ode config");
    const cplx zeta(j.value("zeta_re", 0.0), j.value("zeta_im", 0.0));
    const TimeGrid grid(j.value("h", 0.25), j.value("N", 16), j.value("p", 3));
    const TimeFunction g = parse_forcing(j.at("forcing"));
    const PiecewisePolynomial y = ode_solve(zeta, g, grid);
    auto os = open_out(opts.out);
    csv::write_signal(os, y);
    return 0;
}

int run_sphere(const SphereOptions& opts) {
    if (opts.out.empty()) throw ContractError("sphere: --out is required");
    const json j = read_config(opts.config);
    require_keys(j, {"window", "gamma", "T", "N", "p", "solver", "stab_points", "samples"},
                 "sphere config");
    BenchmarkProblem prob;
    prob.window = make_window(parse_window(j.value("window", std::string("w1"))),
                              j.value("gamma", 1.0));
    const double T = j.value("T", 4.0);
    const int N = j.value("N", 16);
    prob.grid = TimeGrid(T / N, N, j.value("p", 8));
    const std::string solver_name =
        opts.solver_override.value_or(j.value("solver", std::string("allatonce")));
    prob.solver = parse_solver(solver_name);
    prob.stab_points = opts.stab_points_override.value_or(j.value("stab_points", 4));

    const PiecewisePolynomial lambda = solve_sphere_dirichlet(prob);
    auto os = open_out(opts.out);
    csv::write_signal(os, lambda);

    // causality over the elements fully before t_lag
    double before_lag = 0.0;
    const int n_lag = static_cast<int>(std::floor(prob.t_lag / prob.grid.h + 1e-12));
    for (int n = 0; n < std::min(n_lag, N); ++n)
        before_lag = std::max(before_lag, lambda.coeffs.col(n).cwiseAbs().maxCoeff());

    json meta;
    meta["T"] = T;
    meta["N"] = N;
    meta["p"] = prob.grid.p;
    meta["solver"] = solver_name;
    meta["max_abs"] = lambda.max_abs(j.value("samples", 1024));
    meta["max_abs_before_lag"] = before_lag;
    auto js = open_out(opts.out + ".summary.json");
    js << meta.dump(2) << "\n";
    return 0;
}

int run_converge(const ConvergeOptions& opts) {
    if (opts.out.empty()) throw ContractError("converge: --out is required");
    std::ifstream is(opts.config);
    if (!is) throw ContractError("cannot open config file '" + opts.config + "'");
    std::stringstream buf;
    buf << is.rdbuf();
    const StudyConfig config = parse_study_config(buf.str());
    const std::vector<ConvergenceRecord> records = convergence_study(config);
    auto os = open_out(opts.out);
    csv::write_records(os, records);
    int failures = 0;
    for (const ConvergenceRecord& r : records)
        if (!r.diagnostic.empty()) {
            ++failures;
            std::cerr << "converge: p=" << r.p << " failed: " << r.diagnostic << "\n";
        }
    return failures == 0 ? 0 : 1;
}

int run_stability(const StabilityOptions& opts) {
    if (opts.out.empty()) throw ContractError("stability: --out is required");
    const json j = read_config(opts.config);
    require_keys(j, {"T", "h_list", "p_list", "omega"}, "stability config");
    const double T = j.value("T", 8.0);
    const double omega = j.value("omega", 1.0);
    std::vector<double> h_list = j.value("h_list", std::vector<double>{0.5, 0.25, 0.125});
    std::vector<int> p_list = j.value("p_list", std::vector<int>{1, 2, 4, 8});

    Mat a(2, 2);
    a << 0.0, 1.0, -1.0, 0.0;
    const VectorTimeFunction f = [omega](double t) {
        Vec v(2);
        v << std::sin(omega * t), 0.0;
        return v;
    };

    std::vector<csv::StabilityRow> rows;
    for (double h : h_list) {
        const int N = static_cast<int>(std::llround(T / h));
        for (int p : p_list)
            rows.push_back({p, h, T, stability_probe(a, f, TimeGrid(h, N, p))});
    }
    auto os = open_out(opts.out);
    csv::write_stability(os, rows);
    return 0;
}

namespace {

struct SelftestReport {
    int failures = 0;
    void check(const std::string& name, double value, double bound) {
        const bool ok = value <= bound;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << value
                  << " (bound " << bound << ")\n";
        if (!ok) ++failures;
    }
};

}  // namespace

int run_selftest(std::uint64_t seed, int verbosity) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SelftestReport rep;

    {  // closed-form stiffness vs quadrature assembly
        double worst = 0.0;
        for (int p : {0, 1, 2, 5, 9, 12}) {
            const DgMatrices dg = dg_matrices(p);
            const QuadRule rule = gauss_legendre(p + 4);
            RealMat s = dg.trace0 * dg.trace0.transpose();
            for (int q = 0; q < rule.size(); ++q) {
                const RealVec phi = basis_eval(p, rule.nodes[q]);
                const RealVec dphi = basis_deriv_eval(p, rule.nodes[q]);
                s += rule.weights[q] * (phi * dphi.transpose());
            }
            worst = std::max(worst, (s - dg.stiffness).cwiseAbs().maxCoeff());
        }
        rep.check("stiffness closed form vs quadrature", worst, 1e-12);
    }

    {  // spectrum lower bound on the default circle, p = 8
        const int N = 15;
        const double r = default_radius(N);
        double worst = 0.0;
        for (int l = 0; l <= N; ++l) {
            const cplx z = r * std::polar(1.0, -2.0 * std::numbers::pi * l / (N + 1));
            const SpectrumResult s = spectrum(delta(8, z));
            worst = std::max(worst, (1.0 - r * r) / 2.0 - s.eigenvalues.front().real());
        }
        rep.check("spectrum lower-bound defect", worst, 1e-10);
    }

    {  // discrete integral identity on a random signal
        const TimeGrid grid(0.25, 8, 3);
        Mat c(4, 8);
        for (int n = 0; n < 8; ++n)
            for (int jj = 0; jj < 4; ++jj) c(jj, n) = cplx(unit(rng) - 0.5, unit(rng) - 0.5);
        const PiecewisePolynomial psi(grid, c);
        const PiecewisePolynomial lhs = apply(sym_s_inv(), psi);
        const PiecewisePolynomial rhs =
            interpolate([&psi](double t) { return integral_value(psi, t); }, grid);
        rep.check("discrete integral identity",
                  (lhs.coeffs - rhs.coeffs).cwiseAbs().maxCoeff(), 1e-12);
    }

    {  // discrete derivative of t^2 against the projected derivative
        const TimeGrid grid(0.25, 8, 3);
        const PiecewisePolynomial g = interpolate([](double t) { return cplx(t * t); }, grid);
        const PiecewisePolynomial lhs = apply(sym_s(), g);
        const PiecewisePolynomial rhs = l2_project([](double t) { return cplx(2 * t); }, grid);
        rep.check("discrete derivative identity",
                  (lhs.coeffs - rhs.coeffs).cwiseAbs().maxCoeff(), 1e-12);
    }

    {  // composition of two resolvents
        const TimeGrid grid(0.25, 12, 4);
        const cplx z1(-0.5 - unit(rng), unit(rng));
        const cplx z2(-0.2 - unit(rng), -unit(rng));
        const PiecewisePolynomial g =
            interpolate([](double t) { return cplx(std::sin(1.7 * t)); }, grid);
        const PiecewisePolynomial once = apply(sym_product(sym_resolvent(z1), sym_resolvent(z2)), g);
        const PiecewisePolynomial twice = apply(sym_resolvent(z1), apply(sym_resolvent(z2), g));
        rep.check("resolvent composition",
                  (once.coeffs - twice.coeffs).cwiseAbs().maxCoeff(), 1e-9);
    }

    {  // weight series round-trip for the sphere symbol
        const TimeGrid grid(0.25, 8, 3);
        const ConvolutionWeights w = compute_weights(sphere_V(), grid);
        rep.check("sphereV weight series round-trip", weights_series_error(w, sphere_V()), 1e-9);
    }

    {  // solver agreement on a small benchmark
        BenchmarkProblem prob;
        prob.window = make_window(WindowKind::Gevrey, 1.0);
        prob.grid = TimeGrid(0.25, 16, 6);
        prob.solver = SolverKind::AllAtOnce;
        const PiecewisePolynomial aao = solve_sphere_dirichlet(prob);
        prob.solver = SolverKind::Marching;
        prob.stab_points = 4;
        const PiecewisePolynomial mar = solve_sphere_dirichlet(prob);
        rep.check("marching vs all-at-once", relative_error(mar, aao), 1e-8);
    }

    if (verbosity > 0)
        std::cout << (rep.failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
    return rep.failures == 0 ? 0 : 1;
}

int main(int argc, char** argv) {
    CLI::App app{"p-refinement convolution quadrature toolkit"};
    app.require_subcommand(1);

    int jobs = 1;
    std::uint64_t seed = 1;
    int verbosity = 0;
    app.add_option("--jobs", jobs, "worker threads for independent runs");
    app.add_option("--seed", seed, "seed for randomized self-checks");
    app.add_flag("-v,--verbose", verbosity, "more output");

    SpectrumOptions spec_opts;
    auto* spec_cmd = app.add_subcommand("spectrum", "eigenvalues of delta(z)/h on the sampling circle");
    spec_cmd->add_option("--p", spec_opts.p_list, "degrees to sample");
    spec_cmd->add_option("--T", spec_opts.T, "final time");
    spec_cmd->add_option("--N", spec_opts.N, "number of steps");
    double spec_r = -1.0, spec_maxre = 0.0;
    auto* spec_ropt = spec_cmd->add_option("--r", spec_r, "sampling radius");
    auto* spec_mopt = spec_cmd->add_option("--max-re", spec_maxre, "keep eigenvalues with Re < bound");
    spec_cmd->add_flag("--radau", spec_opts.radau, "also emit 3-stage RadauIIa rows");
    spec_cmd->add_option("--out", spec_opts.out, "output CSV")->required();

    WeightsOptions w_opts;
    auto* w_cmd = app.add_subcommand("weights", "convolution weights of a registry symbol");
    w_cmd->add_option("--symbol", w_opts.symbol, "symbol label");
    w_cmd->add_option("--p", w_opts.p, "degree");
    w_cmd->add_option("--h", w_opts.h, "timestep");
    w_cmd->add_option("--N", w_opts.N, "number of steps");
    double w_r = -1.0;
    auto* w_ropt = w_cmd->add_option("--r", w_r, "sampling radius");
    w_cmd->add_option("--out", w_opts.out, "output CSV")->required();

    OdeOptions ode_opts;
    auto* ode_cmd = app.add_subcommand("ode", "DG solve of y' = zeta y + g");
    ode_cmd->add_option("--config", ode_opts.config, "JSON config")->required();
    ode_cmd->add_option("--out", ode_opts.out, "output CSV")->required();

    SphereOptions sph_opts;
    std::string sph_solver;
    int sph_stab = -1;
    auto* sph_cmd = app.add_subcommand("sphere", "trapping-sphere Dirichlet solve");
    sph_cmd->add_option("--config", sph_opts.config, "JSON config")->required();
    sph_cmd->add_option("--out", sph_opts.out, "output CSV")->required();
    auto* sph_sopt = sph_cmd->add_option("--solver", sph_solver, "override config solver");
    auto* sph_qopt = sph_cmd->add_option("--stab-points", sph_stab, "override stabilization points");

    ConvergeOptions conv_opts;
    auto* conv_cmd = app.add_subcommand("converge", "p-sweep convergence study");
    conv_cmd->add_option("--config", conv_opts.config, "JSON study config")->required();
    conv_cmd->add_option("--out", conv_opts.out, "records CSV")->required();

    StabilityOptions stab_opts;
    auto* stab_cmd = app.add_subcommand("stability", "skew-Hermitian stability sweep");
    stab_cmd->add_option("--config", stab_opts.config, "JSON config")->required();
    stab_cmd->add_option("--out", stab_opts.out, "ratios CSV")->required();

    auto* self_cmd = app.add_subcommand("selftest", "quick library self-checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        set_jobs(jobs);
        if (spec_cmd->parsed()) {
            if (spec_ropt->count()) spec_opts.r = spec_r;
            if (spec_mopt->count()) spec_opts.max_re = spec_maxre;
            return run_spectrum(spec_opts);
        }
        if (w_cmd->parsed()) {
            if (w_ropt->count()) w_opts.r = w_r;
            return run_weights(w_opts);
        }
        if (ode_cmd->parsed()) return run_ode(ode_opts);
        if (sph_cmd->parsed()) {
            if (sph_sopt->count()) sph_opts.solver_override = sph_solver;
            if (sph_qopt->count()) sph_opts.stab_points_override = sph_stab;
            return run_sphere(sph_opts);
        }
        if (conv_cmd->parsed()) return run_converge(conv_opts);
        if (stab_cmd->parsed()) return run_stability(stab_opts);
        if (self_cmd->parsed()) return run_selftest(seed, verbosity);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace pcq::cli
