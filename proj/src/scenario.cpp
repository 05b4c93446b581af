#include "robotarm/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace robotarm {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_double(const std::string& key, const std::string& text) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value))
        throw UsageError(key, "expected a finite number, got '" + text + "'");
    return value;
}

long parse_long(const std::string& key, const std::string& text) {
    long value = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw UsageError(key, "expected an integer, got '" + text + "'");
    return value;
}

double positive(const std::string& key, const std::string& text) {
    const double v = parse_double(key, text);
    if (!(v > 0.0)) throw UsageError(key, "must be positive");
    return v;
}

int at_least(const std::string& key, const std::string& text, long lo) {
    const long v = parse_long(key, text);
    if (v < lo || v > 1'000'000) throw UsageError(key, fmt::format("must be in [{}, 1000000]", lo));
    return static_cast<int>(v);
}

Branch parse_branch(const std::string& key, const std::string& text) {
    try {
        return Branch::from_label(text);
    } catch (const DomainError& e) {
        throw UsageError(key, e.what());
    }
}

template <typename F>
auto wrap(const std::string& key, F&& f) {
    try {
        return f();
    } catch (const DomainError& e) {
        throw UsageError(key, e.what());
    }
}

struct Pending {
    double m = 1.0, L = 1.0, g = 1.0;
    std::optional<double> tol_zero, tol_motion;
};

using Setter = std::function<void(Scenario&, Pending&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"arm.m", [](Scenario&, Pending& p, auto& k, auto& v) { p.m = positive(k, v); }},
        {"arm.L", [](Scenario&, Pending& p, auto& k, auto& v) { p.L = positive(k, v); }},
        {"arm.g", [](Scenario&, Pending& p, auto& k, auto& v) { p.g = positive(k, v); }},
        {"torques.beta1", [](Scenario& s, Pending&, auto& k, auto& v) { s.torques.beta1 = parse_double(k, v); }},
        {"torques.beta2", [](Scenario& s, Pending&, auto& k, auto& v) { s.torques.beta2 = parse_double(k, v); }},
        {"analysis.tol_zero", [](Scenario&, Pending& p, auto& k, auto& v) { p.tol_zero = positive(k, v); }},
        {"analysis.tol_motion", [](Scenario&, Pending& p, auto& k, auto& v) { p.tol_motion = positive(k, v); }},
        {"state.theta1", [](Scenario& s, Pending&, auto& k, auto& v) { s.state[kTheta1] = parse_double(k, v); }},
        {"state.p1", [](Scenario& s, Pending&, auto& k, auto& v) { s.state[kP1] = parse_double(k, v); }},
        {"state.theta2", [](Scenario& s, Pending&, auto& k, auto& v) { s.state[kTheta2] = parse_double(k, v); }},
        {"state.p2", [](Scenario& s, Pending&, auto& k, auto& v) { s.state[kP2] = parse_double(k, v); }},
        {"integrator.method",
         [](Scenario& s, Pending&, auto& k, auto& v) { s.integrator.method = wrap(k, [&] { return method_from_string(v); }); }},
        {"integrator.step", [](Scenario& s, Pending&, auto& k, auto& v) { s.integrator.step = positive(k, v); }},
        {"integrator.tolerance",
         [](Scenario& s, Pending&, auto& k, auto& v) {
             s.integrator.tolerance = positive(k, v);
             if (s.integrator.tolerance > 1e-2) throw UsageError(k, "must be <= 1e-2");
         }},
        {"integrator.max_steps",
         [](Scenario& s, Pending&, auto& k, auto& v) {
             s.integrator.max_steps = parse_long(k, v);
             if (s.integrator.max_steps <= 0) throw UsageError(k, "must be positive");
         }},
        {"integrator.horizon", [](Scenario& s, Pending&, auto& k, auto& v) { s.horizon = positive(k, v); }},
        {"output.stride", [](Scenario& s, Pending&, auto& k, auto& v) { s.stride = at_least(k, v, 1); }},
        {"output.format",
         [](Scenario& s, Pending&, auto& k, auto& v) { s.format = wrap(k, [&] { return output_format_from_string(v); }); }},
        {"portrait.plane",
         [](Scenario& s, Pending&, auto& k, auto& v) { s.portrait.plane = wrap(k, [&] { return portrait_plane_from_string(v); }); }},
        {"portrait.branch", [](Scenario& s, Pending&, auto& k, auto& v) { s.portrait.branch = parse_branch(k, v); }},
        {"portrait.n", [](Scenario& s, Pending&, auto& k, auto& v) { s.portrait.n = at_least(k, v, 2); }},
        {"portrait.radius", [](Scenario& s, Pending&, auto& k, auto& v) { s.portrait.radius = positive(k, v); }},
        {"portrait.horizon", [](Scenario& s, Pending&, auto& k, auto& v) { s.portrait.horizon = positive(k, v); }},
        {"manifold.which",
         [](Scenario& s, Pending&, auto& k, auto& v) { s.manifold.which = wrap(k, [&] { return manifold_from_string(v); }); }},
        {"manifold.amplitude", [](Scenario& s, Pending&, auto& k, auto& v) { s.manifold.amplitude = parse_double(k, v); }},
        {"manifold.horizon", [](Scenario& s, Pending&, auto& k, auto& v) { s.manifold.horizon = positive(k, v); }},
        {"manifold.tol", [](Scenario& s, Pending&, auto& k, auto& v) { s.manifold.tol = positive(k, v); }},
        {"normal_form.branch", [](Scenario& s, Pending&, auto& k, auto& v) { s.normal_form_branch = parse_branch(k, v); }},
        {"sweep.beta1_min", [](Scenario& s, Pending&, auto& k, auto& v) { s.sweep.beta1_min = parse_double(k, v); }},
        {"sweep.beta1_max", [](Scenario& s, Pending&, auto& k, auto& v) { s.sweep.beta1_max = parse_double(k, v); }},
        {"sweep.beta2_min", [](Scenario& s, Pending&, auto& k, auto& v) { s.sweep.beta2_min = parse_double(k, v); }},
        {"sweep.beta2_max", [](Scenario& s, Pending&, auto& k, auto& v) { s.sweep.beta2_max = parse_double(k, v); }},
        {"sweep.n1", [](Scenario& s, Pending&, auto& k, auto& v) { s.sweep.n1 = at_least(k, v, 2); }},
        {"sweep.n2", [](Scenario& s, Pending&, auto& k, auto& v) { s.sweep.n2 = at_least(k, v, 2); }},
        {"sweep.threads", [](Scenario& s, Pending&, auto& k, auto& v) { s.sweep.threads = at_least(k, v, 1); }},
    };
    return table;
}

std::string json_scalar_text(const nlohmann::ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    throw UsageError("", "scenario values must be strings or numbers");
}

}  // namespace

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat output_format_from_string(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw DomainError("unknown format '" + std::string(name) + "' (expected csv or json)");
}

std::string_view to_string(PortraitPlane p) {
    switch (p) {
        case PortraitPlane::ManifoldM1: return "manifold-M1";
        case PortraitPlane::ManifoldM2: return "manifold-M2";
        case PortraitPlane::NormalXPx: return "normal-xpx";
        case PortraitPlane::NormalYPy: return "normal-ypy";
    }
    return "manifold-M1";
}

PortraitPlane portrait_plane_from_string(std::string_view name) {
    for (PortraitPlane p : {PortraitPlane::ManifoldM1, PortraitPlane::ManifoldM2, PortraitPlane::NormalXPx,
                            PortraitPlane::NormalYPy})
        if (name == to_string(p)) return p;
    throw DomainError("unknown plane '" + std::string(name) +
                      "' (expected manifold-M1, manifold-M2, normal-xpx or normal-ypy)");
}

void ConfigMap::set(const std::string& key, const std::string& value) {
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
    if (it == entries_.end())
        entries_.emplace_back(key, value);
    else
        it->second = value;
}

const std::string* ConfigMap::find(const std::string& key) const {
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
    return it == entries_.end() ? nullptr : &it->second;
}

ConfigMap parse_config_text(std::string_view text) {
    ConfigMap out;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw UsageError("", fmt::format("line {}: unterminated section header", lineno));
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section.empty()) throw UsageError("", fmt::format("line {}: empty section name", lineno));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw UsageError("", fmt::format("line {}: expected 'key = value'", lineno));
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (section.empty()) throw UsageError(key, fmt::format("line {}: key outside any [section]", lineno));
        if (key.empty()) throw UsageError("", fmt::format("line {}: empty key", lineno));
        out.set(section + "." + key, value);
    }
    return out;
}

ConfigMap load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("--config", "cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    const std::string_view body = trim(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::ordered_json doc;
        try {
            doc = nlohmann::ordered_json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("--config", std::string("invalid JSON: ") + e.what());
        }
        if (!doc.contains("scenario") || !doc["scenario"].is_object())
            throw UsageError("--config", "JSON input has no \"scenario\" object");
        ConfigMap out;
        for (const auto& [section, keys] : doc["scenario"].items()) {
            if (!keys.is_object()) throw UsageError(section, "expected an object of keys");
            for (const auto& [key, value] : keys.items()) out.set(section + "." + key, json_scalar_text(value));
        }
        return out;
    }

    // A CSV output carries the scenario on "#@ " lines.
    std::string echoed;
    std::istringstream lines(text);
    std::string line;
    bool found = false;
    while (std::getline(lines, line)) {
        if (line.rfind("#@", 0) == 0) {
            found = true;
            echoed += line.substr(2) + "\n";
        }
    }
    return parse_config_text(found ? std::string_view(echoed) : std::string_view(text));
}

Scenario scenario_from_config(const ConfigMap& config) {
    Scenario s;
    Pending p;
    for (const auto& [key, value] : config.entries()) {
        auto it = setters().find(key);
        if (it == setters().end()) throw UsageError(key, "unknown key");
        it->second(s, p, key, value);
    }
    s.params = ArmParams::make(p.m, p.L, p.g);
    s.tol_zero = p.tol_zero.value_or(default_tol_zero(s.params));
    s.tol_motion = p.tol_motion.value_or(1e-10 * s.params.mgl());

    const double b1 = 1.5 * 2.0 * s.params.mgl(), b2 = 1.5 * s.params.mgl();
    if (!s.sweep.beta1_min) s.sweep.beta1_min = -b1;
    if (!s.sweep.beta1_max) s.sweep.beta1_max = b1;
    if (!s.sweep.beta2_min) s.sweep.beta2_min = -b2;
    if (!s.sweep.beta2_max) s.sweep.beta2_max = b2;
    if (!(*s.sweep.beta1_min < *s.sweep.beta1_max)) throw UsageError("sweep.beta1_max", "must exceed sweep.beta1_min");
    if (!(*s.sweep.beta2_min < *s.sweep.beta2_max)) throw UsageError("sweep.beta2_max", "must exceed sweep.beta2_min");
    return s;
}

std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> Scenario::echo() const {
    const auto num = [](double x) { return format_number(x); };
    const auto integer = [](long x) { return std::to_string(x); };
    return {
        {"arm", {{"m", num(params.m)}, {"L", num(params.L)}, {"g", num(params.g)}}},
        {"torques", {{"beta1", num(torques.beta1)}, {"beta2", num(torques.beta2)}}},
        {"analysis", {{"tol_zero", num(tol_zero)}, {"tol_motion", num(tol_motion)}}},
        {"state",
         {{"theta1", num(state[kTheta1])}, {"p1", num(state[kP1])}, {"theta2", num(state[kTheta2])},
          {"p2", num(state[kP2])}}},
        {"integrator",
         {{"method", std::string(to_string(integrator.method))},
          {"step", num(integrator.step)},
          {"tolerance", num(integrator.tolerance)},
          {"max_steps", integer(integrator.max_steps)},
          {"horizon", num(horizon)}}},
        {"output", {{"stride", integer(stride)}, {"format", std::string(to_string(format))}}},
        {"portrait",
         {{"plane", std::string(to_string(portrait.plane))},
          {"branch", portrait.branch.label()},
          {"n", integer(portrait.n)},
          {"radius", num(portrait.radius)},
          {"horizon", num(portrait.horizon)}}},
        {"manifold",
         {{"which", std::string(to_string(manifold.which))},
          {"amplitude", num(manifold.amplitude)},
          {"horizon", num(manifold.horizon)},
          {"tol", num(manifold.tol)}}},
        {"normal_form", {{"branch", normal_form_branch.label()}}},
        {"sweep",
         {{"beta1_min", num(sweep.beta1_min.value_or(0.0))},
          {"beta1_max", num(sweep.beta1_max.value_or(0.0))},
          {"beta2_min", num(sweep.beta2_min.value_or(0.0))},
          {"beta2_max", num(sweep.beta2_max.value_or(0.0))},
          {"n1", integer(sweep.n1)},
          {"n2", integer(sweep.n2)},
          {"threads", integer(sweep.threads)}}},
    };
}

std::string Scenario::echo_text(std::string_view prefix) const {
    std::string out;
    for (const auto& [section, keys] : echo()) {
        out += fmt::format("{}[{}]\n", prefix, section);
        for (const auto& [key, value] : keys) out += fmt::format("{}{} = {}\n", prefix, key, value);
    }
    return out;
}

}  // namespace robotarm
