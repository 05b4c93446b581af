#include "robotarm/commands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "robotarm/parallel.hpp"

namespace robotarm {

namespace {

using std::numbers::pi;

std::string num(double x) { return format_number(x); }

CommandResult finish(const Scenario& sc, Json doc, const std::string& csv, std::vector<std::string> warnings,
                     int exit_code) {
    CommandResult r;
    if (sc.format == OutputFormat::Json) {
        doc["warnings"] = warnings;
        r.output = render_json(doc);
    } else {
        r.output = csv;
    }
    r.warnings = std::move(warnings);
    r.exit_code = exit_code;
    return r;
}

std::vector<std::string> warning_lines(const std::vector<std::string>& warnings) {
    std::vector<std::string> out;
    for (const auto& w : warnings) out.push_back("warning: " + w);
    return out;
}

// Fills the spectrum and type of an existing point. Failures are recorded,
// not thrown.
void analyse_point(const Scenario& sc, PointRecord& p) {
    try {
        const RefinedFixedPoint r = refine_fixed_point(sc.params, sc.torques, p.state);
        p.newton_iterations = r.iterations;
        p.newton_residual = r.residual;
    } catch (const std::exception& e) {
        p.error = std::string("newton: ") + e.what();
    }
    try {
        const EigenSet eig = eigen4(jacobian(sc.params, p.state));
        for (std::size_t i = 0; i < 4; ++i) {
            p.eigenvalues[i] = eig.values[i];
            p.eigen_residuals[i] = eig.residuals[i];
        }
        p.min_abs_lambda = eig.min_modulus();
        p.classification = std::string(to_string(classify(eig, sc.tol_zero).kind));
    } catch (const std::exception& e) {
        if (!p.error.empty()) p.error += "; ";
        p.error += e.what();
    }
}

PointRecord record_for(const Scenario& sc, const FixedPoint& fp, double closed_form) {
    PointRecord p;
    p.branch = fp.branch;
    p.exists = fp.exists;
    p.on_boundary = fp.on_boundary;
    if (!fp.exists) return p;
    p.state = fp.state;
    p.energy_direct = fp.energy;
    p.energy_closed_form = closed_form;
    analyse_point(sc, p);
    return p;
}

void add_frequency_discrepancies(const ArmParams& params, const std::vector<PointRecord>& points,
                                 std::vector<Discrepancy>& out) {
    const double w_ref = reference::saddle_center_frequency(params);
    const auto omega_ref = reference::center_frequencies(params);
    for (const PointRecord& p : points) {
        if (p.classification == "SaddleCenter") {
            double nu = 0.0, omega = 0.0;
            for (const auto& l : p.eigenvalues) {
                nu = std::max(nu, l.real());
                omega = std::max(omega, l.imag());
            }
            out.push_back({"saddle_center_frequency", p.branch.label(), w_ref, omega});
            out.push_back({"saddle_center_rate", p.branch.label(), w_ref, nu});
        } else if (p.classification == "PureCenter") {
            std::vector<double> freqs;
            for (const auto& l : p.eigenvalues)
                if (l.imag() > 0.0) freqs.push_back(l.imag());
            std::sort(freqs.rbegin(), freqs.rend());
            if (freqs.size() == 2) {
                out.push_back({"center_frequency_1", p.branch.label(), omega_ref[0], freqs[0]});
                out.push_back({"center_frequency_2", p.branch.label(), omega_ref[1], freqs[1]});
            }
        }
    }
}

std::vector<std::string> point_warnings(const std::vector<PointRecord>& points) {
    std::vector<std::string> out;
    for (const PointRecord& p : points) {
        if (!p.exists)
            out.push_back("branch " + p.branch.label() + " does not exist for these torques");
        else if (p.on_boundary)
            out.push_back("branch " + p.branch.label() + " lies on the existence boundary");
        else if (p.classification == "Degenerate")
            out.push_back("branch " + p.branch.label() + " is degenerate");
    }
    return out;
}

Json rows_json(const std::vector<std::vector<double>>& rows, int stride) {
    Json out = Json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i % static_cast<std::size_t>(stride) != 0 && i + 1 != rows.size()) continue;
        Json r = Json::array();
        for (double x : rows[i]) r.push_back(json_number(x));
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<std::vector<std::string>> rows_text(const std::vector<std::vector<double>>& rows, int stride,
                                                const std::vector<std::string>& prefix = {}) {
    std::vector<std::vector<std::string>> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i % static_cast<std::size_t>(stride) != 0 && i + 1 != rows.size()) continue;
        std::vector<std::string> r = prefix;
        for (double x : rows[i]) r.push_back(num(x));
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<std::vector<double>> trajectory_rows(const Trajectory& traj) {
    std::vector<std::vector<double>> rows;
    rows.reserve(traj.size());
    const double e0 = traj.energies.front();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const State& s = traj.states[i];
        rows.push_back({traj.times[i], s[kTheta1], s[kP1], s[kTheta2], s[kP2], traj.energies[i],
                        traj.energies[i] - e0});
    }
    return rows;
}

FixedPoint saddle_center_at(const Scenario& sc, Branch branch) {
    const FixedPoint fp = analytic_fixed_points(sc.params, sc.torques)[branch_index(branch)];
    if (!fp.exists) throw ClassificationError("branch " + branch.label() + " does not exist for these torques");
    return fp;
}

// Key/value output shared by manifold-check and normal-form.
CommandResult key_value_result(const Scenario& sc, const std::string& command,
                               const std::vector<std::pair<std::string, Json>>& entries,
                               const std::vector<std::string>& metadata, std::vector<std::string> warnings,
                               int exit_code) {
    Json doc = json_document(command, sc);
    Json results = Json::object();
    std::vector<std::vector<std::string>> rows;
    for (const auto& [key, value] : entries) {
        results[key] = value;
        std::string text;
        if (value.is_number_float())
            text = num(value.get<double>());
        else if (value.is_null())
            text = num(kNaN);
        else if (value.is_string())
            text = value.get<std::string>();
        else
            text = value.dump();
        rows.push_back({key, text});
    }
    doc["results"] = std::move(results);
    std::vector<std::string> meta = metadata;
    for (const auto& w : warning_lines(warnings)) meta.push_back(w);
    const std::string csv = csv_document(command, sc, meta, {"quantity", "value"}, rows);
    return finish(sc, std::move(doc), csv, std::move(warnings), exit_code);
}

}  // namespace

namespace reference {

double saddle_center_frequency(const ArmParams& params) {
    return std::sqrt(2.0 * (std::sqrt(17.0) - 3.0)) / 2.0 * params.omega0();
}

std::array<double, 2> center_frequencies(const ArmParams& params) {
    const double r = std::sqrt(17.0);
    return {std::sqrt(2.0 * (5.0 + r)) / 2.0 * params.omega0(), std::sqrt(2.0 * (5.0 - r)) / 2.0 * params.omega0()};
}

Eigen::Matrix4d saddle_center_transform() {
    const double r = std::sqrt(17.0);
    const double a = 5.0 + r;
    const double k = 2.0 * a / (17.0 + 5.0 * r);
    Eigen::Matrix4d T = Eigen::Matrix4d::Zero();
    // columns: x, p_x, y, p_y
    T(0, 0) = 1.0;
    T(0, 2) = 1.0;
    T(1, 1) = -k * 2.0 / a;
    T(1, 3) = k * a / 4.0;
    T(2, 0) = a / 4.0;
    T(2, 2) = 2.0 / a;
    T(3, 1) = k;
    T(3, 3) = -k;
    return T;
}

}  // namespace reference

const std::vector<std::string_view>& command_names() {
    static const std::vector<std::string_view> names = {"fixed-points", "classify",    "simulate", "portrait",
                                                        "manifold-check", "normal-form", "sweep"};
    return names;
}

CommandResult run_command(std::string_view name, const Scenario& scenario) {
    if (name == "fixed-points") return cmd_fixed_points(scenario);
    if (name == "classify") return cmd_classify(scenario);
    if (name == "simulate") return cmd_simulate(scenario);
    if (name == "portrait") return cmd_portrait(scenario);
    if (name == "manifold-check") return cmd_manifold_check(scenario);
    if (name == "normal-form") return cmd_normal_form(scenario);
    if (name == "sweep") return cmd_sweep(scenario);
    throw UsageError("command", "unknown command '" + std::string(name) + "'");
}

Report build_fixed_points_report(const Scenario& sc) {
    Report report;
    report.command = "fixed-points";
    report.scenario = sc.echo();
    const auto fps = analytic_fixed_points(sc.params, sc.torques);
    std::array<double, 4> closed{kNaN, kNaN, kNaN, kNaN};
    try {
        closed = fixed_point_energies_closed_form(sc.params, sc.torques);
    } catch (const DomainError&) {
        // Outside the existence region the closed forms are undefined.
    }
    for (std::size_t i = 0; i < 4; ++i) report.points.push_back(record_for(sc, fps[i], closed[i]));
    for (const PointRecord& p : report.points)
        if (p.exists && std::isfinite(p.energy_closed_form))
            report.discrepancies.push_back({"closed_form_energy", p.branch.label(), p.energy_closed_form,
                                            p.energy_direct});
    add_frequency_discrepancies(sc.params, report.points, report.discrepancies);
    report.warnings = point_warnings(report.points);
    return report;
}

CommandResult cmd_fixed_points(const Scenario& sc) {
    const Report report = build_fixed_points_report(sc);
    CommandResult r;
    r.output = sc.format == OutputFormat::Json ? render_json(to_json(report)) : render_csv(report);
    r.warnings = report.warnings;
    r.exit_code = report.warnings.empty() ? kExitOk : kExitWarning;
    return r;
}

CommandResult cmd_classify(const Scenario& sc) {
    const RefinedFixedPoint refined = refine_fixed_point(sc.params, sc.torques, sc.state);
    const FixedPoint analytic = analytic_fixed_points(sc.params, sc.torques)[branch_index(refined.point.branch)];

    Report report;
    report.command = "classify";
    report.scenario = sc.echo();
    PointRecord p;
    p.branch = refined.point.branch;
    p.exists = true;
    p.on_boundary = analytic.on_boundary;
    p.state = refined.point.state;
    p.energy_direct = refined.point.energy;
    try {
        p.energy_closed_form = fixed_point_energies_closed_form(sc.params, sc.torques)[branch_index(p.branch)];
    } catch (const DomainError&) {
    }
    analyse_point(sc, p);
    p.newton_iterations = refined.iterations;
    p.newton_residual = refined.residual;
    report.points.push_back(p);
    add_frequency_discrepancies(sc.params, report.points, report.discrepancies);
    report.warnings = point_warnings(report.points);
    if (!p.error.empty()) report.warnings.push_back("branch " + p.branch.label() + ": " + p.error);

    CommandResult r;
    r.output = sc.format == OutputFormat::Json ? render_json(to_json(report)) : render_csv(report);
    r.warnings = report.warnings;
    r.exit_code = report.warnings.empty() ? kExitOk : kExitWarning;
    return r;
}

CommandResult cmd_simulate(const Scenario& sc) {
    Trajectory traj;
    std::vector<std::string> warnings;
    int exit_code = kExitOk;
    try {
        traj = integrate(sc.params, sc.torques, sc.state, sc.horizon, sc.integrator);
    } catch (const TruncationError<4>& e) {
        traj = e.partial();
        warnings.push_back(std::string("truncated: ") + e.what());
        exit_code = kExitError;
    }
    const auto rows = trajectory_rows(traj);
    const std::vector<std::string> header = {"t", "theta1", "p1", "theta2", "p2", "energy", "energy_error"};
    const std::string summary =
        fmt::format("summary: samples={} final_time={} energy_drift={} drift_constant={}", traj.size(),
                    num(traj.times.back()), num(traj.energy_drift), num(traj.drift_constant));

    Json doc = json_document("simulate", sc);
    doc["summary"] = Json{{"samples", traj.size()},
                          {"final_time", json_number(traj.times.back())},
                          {"energy_drift", json_number(traj.energy_drift)},
                          {"drift_constant", json_number(traj.drift_constant)}};
    doc["columns"] = header;
    doc["rows"] = rows_json(rows, sc.stride);
    std::string csv = csv_document("simulate", sc, warning_lines(warnings), header, rows_text(rows, sc.stride));
    csv += "# " + summary + "\n";
    return finish(sc, std::move(doc), csv, std::move(warnings), exit_code);
}

CommandResult cmd_portrait(const Scenario& sc) {
    const PortraitOptions& po = sc.portrait;
    const bool manifold_plane = po.plane == PortraitPlane::ManifoldM1 || po.plane == PortraitPlane::ManifoldM2;

    struct Orbit {
        std::string label;
        double energy = kNaN;
        std::vector<std::vector<double>> rows;
        std::string error;
    };
    std::vector<Orbit> orbits(static_cast<std::size_t>(po.n));
    std::vector<std::string> header;
    std::vector<std::string> metadata;

    if (manifold_plane) {
        const ManifoldId id = po.plane == PortraitPlane::ManifoldM1 ? ManifoldId::M1 : ManifoldId::M2;
        const double e_center = reduced_energy(sc.params, id, ReducedState(0.0, 0.0));
        const double e_sep = separatrix_energy(sc.params, id);
        metadata.push_back("separatrix_energy=" + num(e_sep));
        header = {"orbit", "family", "t", "theta1", "p1", "energy"};
        for (int k = 0; k < po.n; ++k) {
            Orbit& o = orbits[static_cast<std::size_t>(k)];
            // Energies from 0.15 to 1.95 of the well depth, never exactly on the separatrix.
            const double f = 0.15 + 1.8 * k / (po.n - 1);
            o.energy = e_center + f * (e_sep - e_center);
            o.label = o.energy < e_sep ? "libration" : "rotation";
            const ReducedState r0(0.0, std::sqrt(4.0 * sc.params.inertia() * (o.energy - e_center)));
            try {
                const ReducedTrajectory traj = integrate_reduced(sc.params, r0, po.horizon, sc.integrator);
                for (std::size_t i = 0; i < traj.size(); ++i)
                    o.rows.push_back({traj.times[i], traj.states[i][0], traj.states[i][1],
                                      reduced_energy(sc.params, id, traj.states[i])});
            } catch (const std::exception& e) {
                o.error = e.what();
            }
        }
    } else {
        const NormalFormFrame frame =
            build_normal_form(sc.params, sc.torques, saddle_center_at(sc, po.branch), sc.tol_zero);
        header = {"orbit", "family", "t", "x", "p_x", "y", "p_y", "theta1", "p1", "theta2", "p2", "energy"};
        metadata.push_back(fmt::format("frame branch={} nu={} omega={} epsilon={}", po.branch.label(),
                                       num(frame.nu), num(frame.omega), num(frame.epsilon)));
        for (int k = 0; k < po.n; ++k) {
            Orbit& o = orbits[static_cast<std::size_t>(k)];
            NormalCoords z0 = NormalCoords::Zero();
            if (po.plane == PortraitPlane::NormalXPx) {
                // Half-step offset keeps starts off the stable and unstable rays.
                const double phi = 2.0 * pi * (k + 0.5) / po.n;
                z0 << po.radius * std::cos(phi), po.radius * std::sin(phi), 0.0, 0.0;
            } else {
                z0 << 0.0, 0.0, po.radius * (k + 1) / po.n, 0.0;
            }
            const EnergySplit split = energy_split_normal(frame, z0, sc.tol_motion);
            o.label = std::string(to_string(split.motion_class));
            o.energy = hamiltonian(sc.params, sc.torques, from_normal_coords(frame, z0));
            try {
                const Trajectory traj =
                    integrate(sc.params, sc.torques, from_normal_coords(frame, z0), po.horizon, sc.integrator);
                for (std::size_t i = 0; i < traj.size(); ++i) {
                    const State& s = traj.states[i];
                    const NormalCoords z = to_normal_coords(frame, s);
                    o.rows.push_back({traj.times[i], z[0], z[1], z[2], z[3], s[kTheta1], s[kP1], s[kTheta2],
                                      s[kP2], traj.energies[i]});
                }
            } catch (const std::exception& e) {
                o.error = e.what();
            }
        }
    }

    std::vector<std::string> warnings;
    Json jorbits = Json::array();
    std::vector<std::vector<std::string>> rows;
    for (std::size_t k = 0; k < orbits.size(); ++k) {
        const Orbit& o = orbits[k];
        metadata.push_back(fmt::format("orbit {}: family={} energy={}", k, o.label, num(o.energy)));
        if (!o.error.empty()) warnings.push_back(fmt::format("orbit {}: {}", k, o.error));
        for (auto& r : rows_text(o.rows, sc.stride, {std::to_string(k), o.label})) rows.push_back(std::move(r));
        jorbits.push_back(Json{{"orbit", k},
                               {"family", o.label},
                               {"energy", json_number(o.energy)},
                               {"error", o.error},
                               {"rows", rows_json(o.rows, sc.stride)}});
    }
    for (const auto& w : warning_lines(warnings)) metadata.push_back(w);

    Json doc = json_document("portrait", sc);
    std::vector<std::string> columns(header.begin() + 2, header.end());
    doc["columns"] = columns;
    doc["orbits"] = std::move(jorbits);
    const std::string csv = csv_document("portrait", sc, metadata, header, rows);
    const int exit_code = warnings.empty() ? kExitOk : kExitWarning;
    return finish(sc, std::move(doc), csv, std::move(warnings), exit_code);
}

CommandResult cmd_manifold_check(const Scenario& sc) {
    const ManifoldOptions& mo = sc.manifold;
    const ReducedState r0(mo.amplitude, 0.0);
    const InvarianceReport rep =
        invariance_check(sc.params, sc.torques, mo.which, r0, mo.horizon, mo.tol, sc.integrator);

    // Reduced flow against the (theta1, p1) part of the full flow.
    const Trajectory full = integrate(sc.params, sc.torques, embed(mo.which, r0), mo.horizon, sc.integrator);
    const ReducedTrajectory reduced = integrate_reduced(sc.params, r0, mo.horizon, sc.integrator);
    double agreement = 0.0;
    if (full.size() == reduced.size()) {
        for (std::size_t i = 0; i < full.size(); ++i)
            agreement = std::max(agreement, (project(full.states[i]) - reduced.states[i]).lpNorm<Eigen::Infinity>());
    } else {
        agreement = (project(full.back()) - reduced.back()).lpNorm<Eigen::Infinity>();
    }
    const bool pass = rep.pass && agreement <= mo.tol;

    std::vector<std::string> warnings;
    if (rep.exploratory) warnings.push_back("nonzero torques: the result is exploratory");
    if (!pass) warnings.push_back("invariance not confirmed at tol " + num(mo.tol));
    const std::vector<std::pair<std::string, Json>> entries = {
        {"manifold", std::string(to_string(mo.which))},
        {"verdict", pass ? "pass" : "fail"},
        {"exploratory", rep.exploratory ? "true" : "false"},
        {"samples", std::to_string(rep.samples)},
        {"max_r_theta", json_number(rep.max_r_theta)},
        {"max_r_p", json_number(rep.max_r_p)},
        {"final_r_theta", json_number(rep.final_r_theta)},
        {"final_r_p", json_number(rep.final_r_p)},
        {"reduced_full_agreement", json_number(agreement)},
        {"energy_drift", json_number(rep.energy_drift)},
        {"initial_energy", json_number(hamiltonian(sc.params, sc.torques, embed(mo.which, r0)))},
        {"separatrix_energy", json_number(separatrix_energy(sc.params, mo.which))},
    };
    return key_value_result(sc, "manifold-check", entries, {}, std::move(warnings),
                            pass ? kExitOk : kExitWarning);
}

CommandResult cmd_normal_form(const Scenario& sc) {
    const Branch branch = sc.normal_form_branch;
    const NormalFormFrame f = build_normal_form(sc.params, sc.torques, saddle_center_at(sc, branch), sc.tol_zero);
    const double inverse_defect =
        (f.transform * f.inverse_transform - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff();

    std::vector<std::pair<std::string, Json>> entries = {
        {"branch", branch.label()},
        {"base_theta1", json_number(f.base_point[kTheta1])},
        {"base_p1", json_number(f.base_point[kP1])},
        {"base_theta2", json_number(f.base_point[kTheta2])},
        {"base_p2", json_number(f.base_point[kP2])},
        {"nu", json_number(f.nu)},
        {"omega", json_number(f.omega)},
        {"nu_over_omega0", json_number(f.nu / sc.params.omega0())},
        {"omega_over_omega0", json_number(f.omega / sc.params.omega0())},
        {"epsilon", json_number(f.epsilon)},
        {"symplectic_defect", json_number(f.symplectic_defect())},
        {"block_coupling", json_number(f.block_coupling())},
        {"inverse_defect", json_number(inverse_defect)},
    };
    static const char* const names[4] = {"x", "p_x", "y", "p_y"};
    static const char* const state_names[4] = {"theta1", "p1", "theta2", "p2"};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            entries.emplace_back(fmt::format("transform[{}][{}]", state_names[i], names[j]),
                                 json_number(f.transform(i, j)));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            entries.emplace_back(fmt::format("inverse_transform[{}][{}]", names[i], state_names[j]),
                                 json_number(f.inverse_transform(i, j)));

    const double w_ref = reference::saddle_center_frequency(sc.params);
    entries.emplace_back("reference_frequency", json_number(w_ref));
    entries.emplace_back("reference_frequency_minus_omega", json_number(w_ref - f.omega));

    // Quoted transform, only meaningful at the (+,-) point with unit constants.
    const Eigen::Matrix4d T = reference::saddle_center_transform();
    const Eigen::Matrix4d S = symplectic_form();
    const Eigen::Matrix4d H1 = hessian(ArmParams{}, make_state(0.0, 0.0, pi, 0.0));
    const Eigen::Matrix4d pulled = T.transpose() * H1 * T;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            entries.emplace_back(fmt::format("reference_transform[{}][{}]", state_names[i], names[j]),
                                 json_number(T(i, j)));
    entries.emplace_back("reference_transform_symplectic_defect",
                         json_number((T.transpose() * S * T - S).cwiseAbs().maxCoeff()));
    entries.emplace_back("reference_transform_block_coupling",
                         json_number(pulled.block<2, 2>(0, 2).cwiseAbs().maxCoeff() / pulled.norm()));

    const std::vector<std::string> metadata = {
        "transform maps (x, p_x, y, p_y) to the displacement from the base point",
        "reference_transform is the quoted change of variables at branch +- with m = L = g = 1 "
        "(displacement (theta1, p1, theta2 - pi, p2)); its defects are evaluated there"};
    return key_value_result(sc, "normal-form", entries, metadata, {}, kExitOk);
}

std::vector<SweepCell> sweep_cells(const Scenario& sc) {
    const SweepOptions& so = sc.sweep;
    const double b1lo = so.beta1_min.value_or(0.0), b1hi = so.beta1_max.value_or(0.0);
    const double b2lo = so.beta2_min.value_or(0.0), b2hi = so.beta2_max.value_or(0.0);
    const std::size_t n = static_cast<std::size_t>(so.n1) * static_cast<std::size_t>(so.n2);
    return parallel_map(n, so.threads, [&](std::size_t idx) {
        const std::size_t i = idx / static_cast<std::size_t>(so.n2), j = idx % static_cast<std::size_t>(so.n2);
        SweepCell cell;
        cell.beta1 = b1lo + (b1hi - b1lo) * static_cast<double>(i) / (so.n1 - 1);
        cell.beta2 = b2lo + (b2hi - b2lo) * static_cast<double>(j) / (so.n2 - 1);
        try {
            const auto fps = analytic_fixed_points(sc.params, Torques{cell.beta1, cell.beta2});
            for (std::size_t b = 0; b < 4; ++b) {
                cell.exists[b] = fps[b].exists;
                cell.on_boundary[b] = fps[b].on_boundary;
                cell.kinds[b] = "none";
                if (!fps[b].exists) continue;
                try {
                    const EigenSet eig = eigen4(jacobian(sc.params, fps[b].state));
                    const double m = eig.min_modulus();
                    if (std::isnan(cell.min_abs_lambda) || m < cell.min_abs_lambda) cell.min_abs_lambda = m;
                    cell.kinds[b] = std::string(to_string(classify(eig, sc.tol_zero).kind));
                } catch (const std::exception& e) {
                    cell.kinds[b] = "error";
                    cell.error += (cell.error.empty() ? "" : "; ") + fps[b].branch.label() + ": " + e.what();
                }
            }
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
        return cell;
    });
}

CommandResult cmd_sweep(const Scenario& sc) {
    const std::vector<SweepCell> cells = sweep_cells(sc);
    const double w0 = sc.params.omega0();
    std::vector<std::string> header = {"beta1", "beta2"};
    for (const Branch& b : kBranches) header.push_back("exists_" + b.label());
    for (const Branch& b : kBranches) header.push_back("on_boundary_" + b.label());
    header.insert(header.end(), {"min_abs_lambda", "min_abs_lambda_over_omega0"});
    for (const Branch& b : kBranches) header.push_back("kind_" + b.label());
    header.push_back("error");

    std::vector<std::vector<std::string>> rows;
    Json jrows = Json::array();
    std::vector<std::string> warnings;
    std::size_t failed = 0;
    for (const SweepCell& c : cells) {
        std::vector<std::string> row = {num(c.beta1), num(c.beta2)};
        for (bool e : c.exists) row.push_back(e ? "true" : "false");
        for (bool e : c.on_boundary) row.push_back(e ? "true" : "false");
        row.push_back(num(c.min_abs_lambda));
        row.push_back(num(c.min_abs_lambda / w0));
        for (const auto& k : c.kinds) row.push_back(k);
        row.push_back(c.error);
        rows.push_back(std::move(row));
        jrows.push_back(Json{{"beta1", json_number(c.beta1)},
                             {"beta2", json_number(c.beta2)},
                             {"exists", c.exists},
                             {"on_boundary", c.on_boundary},
                             {"min_abs_lambda", json_number(c.min_abs_lambda)},
                             {"kinds", c.kinds},
                             {"error", c.error}});
        if (!c.error.empty()) ++failed;
    }
    if (failed) warnings.push_back(fmt::format("{} cells recorded errors", failed));

    Json doc = json_document("sweep", sc);
    doc["cells"] = std::move(jrows);
    const std::string csv = csv_document("sweep", sc, warning_lines(warnings), header, rows);
    const int exit_code = failed ? kExitWarning : kExitOk;
    return finish(sc, std::move(doc), csv, std::move(warnings), exit_code);
}

}  // namespace robotarm
