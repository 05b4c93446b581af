#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "robotarm/normal_form.hpp"
#include "robotarm/report.hpp"
#include "robotarm/scenario.hpp"

namespace robotarm {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitWarning = 2;

struct CommandResult {
    std::string output;  ///< complete file contents in the scenario's format
    int exit_code = kExitOk;
    std::vector<std::string> warnings;  ///< also embedded in the output
};

/// Subcommand names in the order they are listed by the CLI.
const std::vector<std::string_view>& command_names();

/// Dispatches on `name`; throws UsageError for an unknown command.
/// Library errors from the command propagate to the caller.
CommandResult run_command(std::string_view name, const Scenario& scenario);

CommandResult cmd_fixed_points(const Scenario& scenario);
CommandResult cmd_classify(const Scenario& scenario);
CommandResult cmd_simulate(const Scenario& scenario);
CommandResult cmd_portrait(const Scenario& scenario);
CommandResult cmd_manifold_check(const Scenario& scenario);
CommandResult cmd_normal_form(const Scenario& scenario);
CommandResult cmd_sweep(const Scenario& scenario);

/// Structured content of fixed-points: the four candidates with Newton
/// check, spectrum and type, plus the closed-form and frequency
/// comparisons.
Report build_fixed_points_report(const Scenario& scenario);

/// Reference closed forms kept for comparison with computed values.
namespace reference {
/// sqrt(2 (sqrt17 - 3)) / 2 * omega0, quoted as the saddle-center frequency.
double saddle_center_frequency(const ArmParams& params);
/// sqrt(2 (5 +- sqrt17)) / 2 * omega0, quoted as the center frequencies (larger first).
std::array<double, 2> center_frequencies(const ArmParams& params);
/// Quoted linear change of variables at the (+,-) saddle-center for
/// m = L = g = 1: (x, p_x, y, p_y) -> (theta1, p1, theta2 - pi, p2).
Eigen::Matrix4d saddle_center_transform();
}  // namespace reference

/// One cell of a torque sweep.
struct SweepCell {
    double beta1 = 0.0;
    double beta2 = 0.0;
    std::array<bool, 4> exists{};
    std::array<bool, 4> on_boundary{};
    std::array<std::string, 4> kinds;  ///< classification per branch, "none" if absent
    double min_abs_lambda = kNaN;      ///< over all existing points
    std::string error;
};

/// Row-major (beta1 outer, beta2 inner) grid evaluated on sweep.threads
/// threads; the order of the result never depends on the thread count.
std::vector<SweepCell> sweep_cells(const Scenario& scenario);

}  // namespace robotarm
