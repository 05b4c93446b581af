#pragma once

#include <array>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "robotarm/equilibria.hpp"
#include "robotarm/scenario.hpp"

namespace robotarm {

using Json = nlohmann::ordered_json;
using ScenarioEcho =
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One equilibrium candidate as reported by fixed-points.
struct PointRecord {
    Branch branch;
    bool exists = false;
    bool on_boundary = false;
    State state = State::Constant(kNaN);
    double energy_direct = kNaN;
    double energy_closed_form = kNaN;  ///< reference closed form, NaN if undefined
    int newton_iterations = 0;
    double newton_residual = kNaN;
    std::array<std::complex<double>, 4> eigenvalues{{{kNaN, kNaN}, {kNaN, kNaN}, {kNaN, kNaN}, {kNaN, kNaN}}};
    std::array<double, 4> eigen_residuals{{kNaN, kNaN, kNaN, kNaN}};
    double min_abs_lambda = kNaN;
    std::string classification;  ///< FixedPointKind name, empty if not classified
    std::string error;           ///< non-fatal failure for this point
};

/// A reference closed-form value next to the value computed here.
struct Discrepancy {
    std::string id;
    std::string where;
    double reference = kNaN;
    double computed = kNaN;
    double difference() const { return reference - computed; }
};

struct Report {
    std::string command;
    ScenarioEcho scenario;
    std::vector<PointRecord> points;
    std::vector<Discrepancy> discrepancies;
    std::vector<std::string> warnings;
};

/// JSON scalar for an echo value: integer, number or string.
Json echo_value_json(const std::string& text);
Json scenario_json(const ScenarioEcho& echo);
ScenarioEcho scenario_from_json(const Json& j);

/// Stable key order; NaN is written as null and read back as NaN.
Json to_json(const Report& report);
Report report_from_json(const Json& j);

/// '#'-prefixed metadata, the "#@ " scenario echo, then one CSV row per point.
std::string render_csv(const Report& report);

/// Shared CSV framing: tool line, command line, scenario echo, extra
/// metadata lines (each gets "# "), header row, data rows.
std::string csv_document(const std::string& command, const Scenario& scenario,
                         const std::vector<std::string>& metadata, const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);
std::string csv_document(const std::string& command, const ScenarioEcho& echo,
                         const std::vector<std::string>& metadata, const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

/// {"tool", "version", "command", "scenario"} prefix of every JSON output.
Json json_document(const std::string& command, const Scenario& scenario);

/// Number as JSON, NaN and infinities as null.
Json json_number(double x);
double number_from_json(const Json& j);

/// dump(2) plus a trailing newline.
std::string render_json(const Json& j);

}  // namespace robotarm
