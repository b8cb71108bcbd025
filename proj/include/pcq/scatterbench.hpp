#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcq/cqengine.hpp"
#include "pcq/timebasis.hpp"
#include "pcq/types.hpp"

namespace pcq {

enum class WindowKind { Gevrey, Poly };

/// Compactly supported window on (0,1).
///
/// gevrey: w(t) = c exp(-1/[t(1-t)]^gamma), normalized so w(1/2) = 1.
/// poly:   w(t) = t^2 (1-t)^2 (so w(1/2) = 1/16).
struct WindowFunction {
    WindowKind kind = WindowKind::Gevrey;
    double gamma = 1.0;
    double c = 1.0;
};

WindowFunction make_window(WindowKind kind, double gamma = 1.0);
double window_eval(const WindowFunction& w, double t);

enum class SolverKind { Marching, AllAtOnce };

/// Interior Dirichlet problem on the unit sphere with spatially constant data
/// g(t) = w(t - t_lag) sin(freq (t - t_lag)).
struct BenchmarkProblem {
    WindowFunction window;
    double t_lag = 0.5;
    double carrier_freq = 0.0;  ///< 0 selects the default 4*pi
    TimeGrid grid;
    SolverKind solver = SolverKind::AllAtOnce;
    int stab_points = 4;
};

TimeFunction dirichlet_data(const BenchmarkProblem& prob);

/// Solves d_t V(d_t) lambda = (-1/2 + K(d_t)) g as one CQ solve with the
/// combined left symbol s V(s).
PiecewisePolynomial solve_sphere_dirichlet(const BenchmarkProblem& prob);

/// max_t |a - b| / max_t |b| over a uniform sample grid on (0, T].
double relative_error(const PiecewisePolynomial& a, const PiecewisePolynomial& b,
                      int samples = 1024);

struct ConvergenceRecord {
    int p = 0;
    double h = 0.0;
    int N = 0;
    double T = 0.0;
    std::string solver;
    double rel_error = 0.0;
    double seconds = 0.0;
    int p_ref = 0;
    std::string diagnostic;  ///< set when the run failed (rel_error = NaN)
};

struct StudyConfig {
    WindowKind window = WindowKind::Gevrey;
    double gamma = 1.0;
    double T = 4.0;
    int N = 16;
    std::vector<int> p_list;
    int p_ref = 24;
    SolverKind solver = SolverKind::AllAtOnce;
    int stab_points = 4;
    int samples = 1024;
    /// When set, appends a 3-stage RadauIIa baseline whose step count matches
    /// the operator applications of the DG run at this degree.
    std::optional<int> radau_match_p;
};

/// Runs the p-sweep against a self-reference at p_ref (always all-at-once).
/// Failed entries yield NaN records with a diagnostic instead of aborting.
std::vector<ConvergenceRecord> convergence_study(const StudyConfig& config);

}  // namespace pcq
