#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mechsq/core_model.hpp"
#include "mechsq/feedback.hpp"

namespace mechsq::runner {

enum class Engine { gaussian_effective, fock_full, fock_feedback, fock_no_feedback };

std::string_view to_string(Engine e);
/// Throws InvalidArgument for unknown names.
Engine parse_engine(std::string_view name);

/// Engines that run the measure-and-reset loop (enabled or not) and report p_e.
constexpr bool uses_schedule(Engine e) { return e == Engine::fock_feedback || e == Engine::fock_no_feedback; }
constexpr bool uses_fock(Engine e) { return e != Engine::gaussian_effective; }

struct WignerRequest {
    std::vector<Real> times;
    Real x_min = -4.0, x_max = 4.0;
    Real y_min = -4.0, y_max = 4.0;
    int nx = 81, ny = 81;
};

/// One simulation run. Optional fields left empty take their documented
/// defaults when the run is resolved.
struct ExperimentConfig {
    std::string name = "custom";
    SystemParams params;
    Engine engine = Engine::gaussian_effective;
    /// Feedback engines only. dt_measure defaults to 2 pi / omega_a,
    /// n_intervals to round(horizon / dt_measure).
    std::optional<Real> dt_measure;
    std::optional<int> n_intervals;
    std::optional<int> cutoff;  ///< default_cutoff(n_th) when empty
    Real horizon = 150.0;
    Real sample_cadence = 0.5;  ///< sampling for non-protocol engines
    std::optional<Real> integration_step;
    SteadyStateCriterion steady_state;
    /// Stop protocol runs once the steady state is detected.
    bool stop_when_steady = false;
    std::vector<std::string> outputs = {"time_series"};  ///< time_series, steady_state, wigner
    std::optional<WignerRequest> wigner;
    std::filesystem::path output_path;  ///< output file stem for custom runs (default: name)

    [[nodiscard]] int resolved_cutoff() const;
    [[nodiscard]] FeedbackSchedule resolved_schedule() const;
    [[nodiscard]] Real resolved_integration_step() const;
};

/// Semantic checks shared by file and programmatic configs. Throws InvalidArgument.
void check(const ExperimentConfig& config);

/// Parses a YAML experiment file. Unknown keys are errors; messages carry the
/// line number of the offending node.
ExperimentConfig parse_config(const std::filesystem::path& file);
ExperimentConfig parse_config_string(const std::string& text, const std::string& origin = "<string>");

/// Resolved parameter listing used in manifests ("key: value" lines).
std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& config);

}  // namespace mechsq::runner
