// robotarm: equilibria, linear stability, normal forms and trajectories of a
// two-link arm under constant joint torques.
//
//   robotarm <command> [--config FILE] [--m M --L L --g G --beta1 B1 --beta2 B2]
//            [--tol-zero T] [--format csv|json] [--out PATH] [--set section.key=value ...]
//
// Exit status: 0 success, 1 error, 2 success with warnings.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "robotarm/commands.hpp"

using namespace robotarm;

namespace {

struct Flags {
    std::optional<double> m, L, g, beta1, beta2, tol_zero;
    std::optional<std::string> config, out, format;
    std::vector<std::string> set;
};

ConfigMap resolve_config(const Flags& f) {
    ConfigMap cfg = f.config ? load_config_file(*f.config) : ConfigMap{};
    for (const std::string& kv : f.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--set", "expected section.key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    const auto put = [&](const char* key, const std::optional<double>& v) {
        if (v) cfg.set(key, format_number(*v));
    };
    put("arm.m", f.m);
    put("arm.L", f.L);
    put("arm.g", f.g);
    put("torques.beta1", f.beta1);
    put("torques.beta2", f.beta2);
    put("analysis.tol_zero", f.tol_zero);
    if (f.format) cfg.set("output.format", *f.format);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equilibria, stability, normal forms and trajectories of a two-link arm under constant torques"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    Flags flags;
    app.add_option("--m", flags.m, "mass at each link end [kg]");
    app.add_option("--L", flags.L, "link length [m]");
    app.add_option("--g", flags.g, "gravitational acceleration [m/s^2]");
    app.add_option("--beta1", flags.beta1, "shoulder torque [N m]");
    app.add_option("--beta2", flags.beta2, "elbow torque [N m]");
    app.add_option("--tol-zero", flags.tol_zero, "zero threshold for eigenvalue moduli [1/s]");
    app.add_option("--config", flags.config, "config file, or a previous CSV/JSON output to re-run");
    app.add_option("--out", flags.out, "output path (default: stdout)");
    app.add_option("--format", flags.format, "csv or json");
    app.add_option("--set", flags.set, "override any config key, e.g. --set sweep.threads=4");

    std::string command;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"fixed-points", "the four equilibria with energies, spectra and types"},
        {"classify", "refine [state] to an equilibrium and classify it"},
        {"simulate", "integrate from [state] over integrator.horizon"},
        {"portrait", "phase portrait families on a manifold or normal-form plane"},
        {"manifold-check", "integrate from a manifold and measure the residual"},
        {"normal-form", "quadratic normal-form frame at a saddle-center"},
        {"sweep", "existence and stability atlas over a torque grid"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        sub->callback([&command, n = name] { command = n; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        const Scenario scenario = scenario_from_config(resolve_config(flags));
        const CommandResult result = run_command(command, scenario);
        if (flags.out) {
            std::ofstream out(*flags.out, std::ios::binary);
            if (!out) throw UsageError("--out", "cannot write '" + *flags.out + "'");
            out << result.output;
            if (!out) throw UsageError("--out", "write failed for '" + *flags.out + "'");
        } else {
            std::cout << result.output;
        }
        for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
        return result.exit_code;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kExitError;
}
