#include "robotarm/report.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

namespace robotarm {

namespace {

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string scalar_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_float()) return format_number(v.get<double>());
    throw UsageError("scenario", "values must be strings or numbers");
}

}  // namespace

Json json_number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double number_from_json(const Json& j) { return j.is_null() ? kNaN : j.get<double>(); }

Json echo_value_json(const std::string& text) {
    const char* end = text.data() + text.size();
    long long i = 0;
    if (auto [p, ec] = std::from_chars(text.data(), end, i); ec == std::errc{} && p == end) return Json(i);
    double d = 0.0;
    if (auto [p, ec] = std::from_chars(text.data(), end, d); ec == std::errc{} && p == end) return Json(d);
    return Json(text);
}

Json scenario_json(const ScenarioEcho& echo) {
    Json out = Json::object();
    for (const auto& [section, keys] : echo) {
        Json s = Json::object();
        for (const auto& [key, value] : keys) s[key] = echo_value_json(value);
        out[section] = std::move(s);
    }
    return out;
}

ScenarioEcho scenario_from_json(const Json& j) {
    ScenarioEcho out;
    for (const auto& [section, keys] : j.items()) {
        std::vector<std::pair<std::string, std::string>> kv;
        for (const auto& [key, value] : keys.items()) kv.emplace_back(key, scalar_text(value));
        out.emplace_back(section, std::move(kv));
    }
    return out;
}

Json json_document(const std::string& command, const Scenario& scenario) {
    Json doc = Json::object();
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["command"] = command;
    doc["scenario"] = scenario_json(scenario.echo());
    return doc;
}

Json to_json(const Report& report) {
    Json doc = Json::object();
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["command"] = report.command;
    doc["scenario"] = scenario_json(report.scenario);
    Json points = Json::array();
    for (const PointRecord& p : report.points) {
        Json jp = Json::object();
        jp["branch"] = p.branch.label();
        jp["exists"] = p.exists;
        jp["on_boundary"] = p.on_boundary;
        jp["state"] = Json::array();
        for (int i = 0; i < 4; ++i) jp["state"].push_back(json_number(p.state[i]));
        jp["energy_direct"] = json_number(p.energy_direct);
        jp["energy_closed_form"] = json_number(p.energy_closed_form);
        jp["newton_iterations"] = p.newton_iterations;
        jp["newton_residual"] = json_number(p.newton_residual);
        jp["eigenvalues"] = Json::array();
        for (const auto& l : p.eigenvalues)
            jp["eigenvalues"].push_back(Json::array({json_number(l.real()), json_number(l.imag())}));
        jp["eigen_residuals"] = Json::array();
        for (double r : p.eigen_residuals) jp["eigen_residuals"].push_back(json_number(r));
        jp["min_abs_lambda"] = json_number(p.min_abs_lambda);
        jp["classification"] = p.classification;
        jp["error"] = p.error;
        points.push_back(std::move(jp));
    }
    doc["points"] = std::move(points);
    Json disc = Json::array();
    for (const Discrepancy& d : report.discrepancies)
        disc.push_back(Json{{"id", d.id},
                            {"where", d.where},
                            {"reference", json_number(d.reference)},
                            {"computed", json_number(d.computed)},
                            {"difference", json_number(d.difference())}});
    doc["discrepancies"] = std::move(disc);
    doc["warnings"] = report.warnings;
    return doc;
}

Report report_from_json(const Json& j) {
    Report r;
    r.command = j.at("command").get<std::string>();
    r.scenario = scenario_from_json(j.at("scenario"));
    for (const Json& jp : j.at("points")) {
        PointRecord p;
        p.branch = Branch::from_label(jp.at("branch").get<std::string>());
        p.exists = jp.at("exists").get<bool>();
        p.on_boundary = jp.at("on_boundary").get<bool>();
        for (int i = 0; i < 4; ++i) p.state[i] = number_from_json(jp.at("state").at(i));
        p.energy_direct = number_from_json(jp.at("energy_direct"));
        p.energy_closed_form = number_from_json(jp.at("energy_closed_form"));
        p.newton_iterations = jp.at("newton_iterations").get<int>();
        p.newton_residual = number_from_json(jp.at("newton_residual"));
        for (std::size_t i = 0; i < 4; ++i) {
            const Json& l = jp.at("eigenvalues").at(i);
            p.eigenvalues[i] = {number_from_json(l.at(0)), number_from_json(l.at(1))};
            p.eigen_residuals[i] = number_from_json(jp.at("eigen_residuals").at(i));
        }
        p.min_abs_lambda = number_from_json(jp.at("min_abs_lambda"));
        p.classification = jp.at("classification").get<std::string>();
        p.error = jp.at("error").get<std::string>();
        r.points.push_back(std::move(p));
    }
    for (const Json& jd : j.at("discrepancies"))
        r.discrepancies.push_back(Discrepancy{jd.at("id").get<std::string>(), jd.at("where").get<std::string>(),
                                              number_from_json(jd.at("reference")),
                                              number_from_json(jd.at("computed"))});
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
}

std::string csv_document(const std::string& command, const ScenarioEcho& echo,
                         const std::vector<std::string>& metadata, const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::string out = fmt::format("# {} {}\n# command: {}\n", kToolName, kToolVersion, command);
    for (const auto& [section, keys] : echo) {
        out += fmt::format("#@ [{}]\n", section);
        for (const auto& [key, value] : keys) out += fmt::format("#@ {} = {}\n", key, value);
    }
    for (const std::string& m : metadata) out += "# " + m + "\n";
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + csv_field(header[i]);
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(row[i]);
        out += "\n";
    }
    return out;
}

std::string csv_document(const std::string& command, const Scenario& scenario,
                         const std::vector<std::string>& metadata, const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    return csv_document(command, scenario.echo(), metadata, header, rows);
}

std::string render_csv(const Report& report) {
    std::vector<std::string> meta;
    for (const Discrepancy& d : report.discrepancies)
        meta.push_back(fmt::format("discrepancy {} {}: reference={} computed={} difference={}", d.id, d.where,
                                   format_number(d.reference), format_number(d.computed),
                                   format_number(d.difference())));
    for (const std::string& w : report.warnings) meta.push_back("warning: " + w);

    const std::vector<std::string> header = {
        "branch", "exists", "on_boundary", "theta1", "p1", "theta2", "p2", "energy_direct", "energy_closed_form",
        "newton_iterations", "newton_residual", "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im",
        "lambda3_re", "lambda3_im", "lambda4_re", "lambda4_im", "max_eigen_residual", "min_abs_lambda",
        "classification", "error"};
    std::vector<std::vector<std::string>> rows;
    for (const PointRecord& p : report.points) {
        std::vector<std::string> row = {p.branch.label(), bool_text(p.exists), bool_text(p.on_boundary)};
        for (int i = 0; i < 4; ++i) row.push_back(format_number(p.state[i]));
        row.push_back(format_number(p.energy_direct));
        row.push_back(format_number(p.energy_closed_form));
        row.push_back(std::to_string(p.newton_iterations));
        row.push_back(format_number(p.newton_residual));
        double worst = kNaN;
        for (std::size_t i = 0; i < 4; ++i) {
            row.push_back(format_number(p.eigenvalues[i].real()));
            row.push_back(format_number(p.eigenvalues[i].imag()));
            if (std::isnan(worst) || p.eigen_residuals[i] > worst) worst = p.eigen_residuals[i];
        }
        row.push_back(format_number(worst));
        row.push_back(format_number(p.min_abs_lambda));
        row.push_back(p.classification);
        row.push_back(p.error);
        rows.push_back(std::move(row));
    }
    return csv_document(report.command, report.scenario, meta, header, rows);
}

std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace robotarm
