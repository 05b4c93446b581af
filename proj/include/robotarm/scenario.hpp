#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "robotarm/equilibria.hpp"
#include "robotarm/integrate.hpp"
#include "robotarm/linear_analysis.hpp"
#include "robotarm/manifolds.hpp"

namespace robotarm {

inline constexpr std::string_view kToolName = "robotarm";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum class OutputFormat { Csv, Json };

std::string_view to_string(OutputFormat f);
OutputFormat output_format_from_string(std::string_view name);

enum class PortraitPlane { ManifoldM1, ManifoldM2, NormalXPx, NormalYPy };

std::string_view to_string(PortraitPlane p);
PortraitPlane portrait_plane_from_string(std::string_view name);

/// Flat configuration: "section.key" -> raw value text, in file order of
/// first appearance. Later assignments overwrite earlier ones.
class ConfigMap {
public:
    void set(const std::string& key, const std::string& value);
    const std::string* find(const std::string& key) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// INI-like text: "[section]" headers, "key = value" lines, '#' or ';'
/// comments. Keys before any header are an error.
ConfigMap parse_config_text(std::string_view text);

/// Reads a config from `path`. Accepts a plain config file, a CSV output of
/// this tool (its "#@ " echo lines) or a JSON output (its "scenario" object).
ConfigMap load_config_file(const std::string& path);

struct PortraitOptions {
    PortraitPlane plane = PortraitPlane::ManifoldM1;
    Branch branch{+1, -1};  ///< saddle-center for the normal planes
    int n = 9;
    double radius = 1e-2;   ///< normal-plane start radius (normal coordinates)
    double horizon = 20.0;
};

struct ManifoldOptions {
    ManifoldId which = ManifoldId::M1;
    double amplitude = 0.3;  ///< initial theta1, with p1 = 0
    double horizon = 50.0;
    double tol = 1e-6;
};

struct SweepOptions {
    // Unset ranges default to +-1.5 times the existence bounds.
    std::optional<double> beta1_min, beta1_max, beta2_min, beta2_max;
    int n1 = 101;
    int n2 = 101;
    int threads = 1;
};

/// Everything a command needs. Build with scenario_from_config; the result
/// is validated and every defaulted quantity is resolved.
struct Scenario {
    ArmParams params;
    Torques torques;
    double tol_zero = 0.0;
    double tol_motion = 0.0;
    State state = make_state(0.01, 0.0, 0.01, 0.0);
    IntegratorSpec integrator;
    double horizon = 100.0;
    int stride = 1;
    OutputFormat format = OutputFormat::Csv;
    PortraitOptions portrait;
    ManifoldOptions manifold;
    Branch normal_form_branch{+1, -1};
    SweepOptions sweep;

    /// Resolved scenario as ordered (section, [(key, value)]) with values
    /// printed to 17 significant digits.
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> echo() const;
    /// echo() rendered as config text, each line prefixed with `prefix`.
    std::string echo_text(std::string_view prefix = "") const;
};

/// Throws UsageError naming the key for unknown keys, unparsable values and
/// values that violate an invariant.
Scenario scenario_from_config(const ConfigMap& config);

/// 17 significant digits, lowercase exponent; reads back to the same double.
std::string format_number(double x);

}  // namespace robotarm
