#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcq/scatterbench.hpp"

namespace pcq::cli {

struct SpectrumOptions {
    std::vector<int> p_list{8};
    double T = 8.0;
    int N = 15;
    std::optional<double> r;
    std::optional<double> max_re;  ///< keep eigenvalues with Re(lambda) < max_re
    bool radau = false;            ///< also emit RadauIIa stage-symbol rows
    std::string out;
};

struct WeightsOptions {
    std::string symbol = "s";
    int p = 2;
    double h = 0.25;
    int N = 16;
    std::optional<double> r;
    std::string out;
};

struct OdeOptions {
    std::string config;
    std::string out;
};

struct SphereOptions {
    std::string config;
    std::string out;
    std::optional<std::string> solver_override;
    std::optional<int> stab_points_override;
};

struct ConvergeOptions {
    std::string config;
    std::string out;
};

struct StabilityOptions {
    std::string config;
    std::string out;
};

int run_spectrum(const SpectrumOptions& opts);
int run_weights(const WeightsOptions& opts);
int run_ode(const OdeOptions& opts);
int run_sphere(const SphereOptions& opts);
int run_converge(const ConvergeOptions& opts);
int run_stability(const StabilityOptions& opts);
int run_selftest(std::uint64_t seed, int verbosity);

/// Parses a study config JSON document ({window, gamma, T, N, p_list, p_ref,
/// solver, stab_points, samples[, radau_match_p]}); unknown keys are rejected.
StudyConfig parse_study_config(const std::string& text);
std::string study_config_to_json(const StudyConfig& config);

/// Full argv entry point used by the pcq binary.
int main(int argc, char** argv);

}  // namespace pcq::cli
