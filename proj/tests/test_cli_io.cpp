#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "robotarm/commands.hpp"

using namespace robotarm;
namespace fs = std::filesystem;

namespace {

Scenario scenario(std::initializer_list<std::pair<const char*, const char*>> kv) {
    ConfigMap cfg;
    for (const auto& [k, v] : kv) cfg.set(k, v);
    return scenario_from_config(cfg);
}

std::string data_lines(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') out += line + "\n";
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("robotarm_cli_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(ROBOTARM_CLI_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config text parsing") {
    const ConfigMap cfg = parse_config_text(
        "# comment\n[arm]\nm = 2\n  L=0.5 \n; other comment\n[torques]\nbeta1 = 0.25\n[arm]\nm = 3\n");
    REQUIRE(cfg.find("arm.m"));
    CHECK(*cfg.find("arm.m") == "3");
    CHECK(*cfg.find("arm.L") == "0.5");
    CHECK(*cfg.find("torques.beta1") == "0.25");
    CHECK(cfg.find("arm.g") == nullptr);
    CHECK(cfg.entries().front().first == "arm.m");

    CHECK_THROWS_AS(parse_config_text("m = 1\n"), UsageError);
    CHECK_THROWS_AS(parse_config_text("[arm\nm = 1\n"), UsageError);
    CHECK_THROWS_AS(parse_config_text("[arm]\njust text\n"), UsageError);
}

TEST_CASE("usage errors name the offending key") {
    const auto key_of = [](std::initializer_list<std::pair<const char*, const char*>> kv) {
        try {
            scenario(kv);
        } catch (const UsageError& e) {
            return e.key();
        }
        return std::string("no error");
    };
    CHECK(key_of({{"arm.mass", "1"}}) == "arm.mass");
    CHECK(key_of({{"arm.m", "-1"}}) == "arm.m");
    CHECK(key_of({{"arm.g", "abc"}}) == "arm.g");
    CHECK(key_of({{"torques.beta1", "nan"}}) == "torques.beta1");
    CHECK(key_of({{"integrator.method", "rk4"}}) == "integrator.method");
    CHECK(key_of({{"integrator.tolerance", "0.5"}}) == "integrator.tolerance");
    CHECK(key_of({{"portrait.n", "1"}}) == "portrait.n");
    CHECK(key_of({{"sweep.n1", "1"}}) == "sweep.n1");
    CHECK(key_of({{"output.format", "xml"}}) == "output.format");
    CHECK(key_of({{"normal_form.branch", "+"}}) == "normal_form.branch");
    CHECK(key_of({{"sweep.beta1_min", "1"}, {"sweep.beta1_max", "0"}}) == "sweep.beta1_max");
    CHECK(key_of({{"analysis.tol_zero", "0"}}) == "analysis.tol_zero");
}

TEST_CASE("scenario defaults are resolved from the arm") {
    const Scenario s = scenario({{"arm.m", "2"}, {"arm.g", "9.81"}});
    CHECK(s.tol_zero == doctest::Approx(1e-7 * std::sqrt(9.81)));
    CHECK(s.tol_motion == doctest::Approx(1e-10 * 2 * 9.81));
    CHECK(*s.sweep.beta1_max == doctest::Approx(1.5 * 2 * 2 * 9.81));
    CHECK(*s.sweep.beta2_min == doctest::Approx(-1.5 * 2 * 9.81));
    CHECK(s.integrator.method == Method::ImplicitMidpoint);
}

TEST_CASE("echo round-trips through the parser") {
    const Scenario s = scenario({{"arm.L", "0.7"},
                                 {"torques.beta1", "0.1"},
                                 {"state.p2", "-0.3"},
                                 {"integrator.method", "adaptive"},
                                 {"portrait.plane", "normal-ypy"},
                                 {"manifold.which", "M2"},
                                 {"sweep.threads", "3"}});
    const Scenario back = scenario_from_config(parse_config_text(s.echo_text()));
    CHECK(back.echo() == s.echo());
    CHECK(back.state == s.state);
    CHECK(back.params.L == s.params.L);
}

TEST_CASE("numbers are written with 17 significant digits") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1e-8) == "1e-08");
    CHECK(format_number(-2.5e300) == "-2.5000000000000001e+300");
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng) * std::pow(10.0, 40 * u(rng));
        const std::string t = format_number(x);
        CHECK(t.find('E') == std::string::npos);
        CHECK(std::strtod(t.c_str(), nullptr) == x);
    }
}

TEST_CASE("report round-trips through JSON") {
    for (const auto& torques : {std::pair{"0", "0"}, std::pair{"0.7", "-0.4"}, std::pair{"5", "0"}}) {
        const Scenario s = scenario({{"torques.beta1", torques.first}, {"torques.beta2", torques.second}});
        const Report r = build_fixed_points_report(s);
        const Json j = to_json(r);
        const Report back = report_from_json(Json::parse(j.dump()));
        CHECK(to_json(back).dump() == j.dump());
        REQUIRE(back.points.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(back.points[i].branch == r.points[i].branch);
            CHECK(back.points[i].exists == r.points[i].exists);
            CHECK(back.points[i].classification == r.points[i].classification);
            for (int k = 0; k < 4; ++k) {
                const double a = back.points[i].state[k], b = r.points[i].state[k];
                CHECK(((std::isnan(a) && std::isnan(b)) || a == b));
            }
        }
        CHECK(render_csv(back) == render_csv(r));
    }
}

TEST_CASE("fixed-points examples") {
    SUBCASE("g = 9.81 without torque") {
        const Report r = build_fixed_points_report(scenario({{"arm.g", "9.81"}}));
        const char* kinds[4] = {"PureCenter", "SaddleCenter", "SaddleCenter", "PureSaddle"};
        for (int i = 0; i < 4; ++i) CHECK(r.points[i].classification == kinds[i]);
        CHECK(r.warnings.empty());
        CHECK(cmd_fixed_points(scenario({{"arm.g", "9.81"}})).exit_code == kExitOk);
    }
    SUBCASE("torque beyond 2mgL removes every point") {
        const Scenario s = scenario({{"arm.g", "9.81"}, {"torques.beta1", "25"}});
        const CommandResult res = cmd_fixed_points(s);
        CHECK(res.exit_code == kExitWarning);
        for (const PointRecord& p : build_fixed_points_report(s).points) CHECK_FALSE(p.exists);
    }
    SUBCASE("half the bounds puts both joints at sin = 1/2") {
        const Report r = build_fixed_points_report(
            scenario({{"arm.g", "9.81"}, {"torques.beta1", "9.81"}, {"torques.beta2", "4.905"}}));
        for (const PointRecord& p : r.points) {
            CHECK(std::sin(p.state[kTheta1]) == doctest::Approx(0.5).epsilon(1e-14));
            CHECK(std::sin(p.state[kTheta2]) == doctest::Approx(0.5).epsilon(1e-14));
            CHECK(p.newton_residual <= 1e-12 * 9.81);
        }
    }
    SUBCASE("boundary points warn") {
        const CommandResult res = cmd_fixed_points(scenario({{"torques.beta2", "1"}}));
        CHECK(res.exit_code == kExitWarning);
        CHECK(res.output.find("existence boundary") != std::string::npos);
    }
}

TEST_CASE("discrepancy records") {
    const auto find = [](const Report& r, const std::string& id, const std::string& where) {
        for (const Discrepancy& d : r.discrepancies)
            if (d.id == id && d.where == where) return d;
        FAIL("missing discrepancy " << id << " " << where);
        return Discrepancy{};
    };
    const Report free = build_fixed_points_report(scenario({}));
    for (const char* b : {"++", "+-", "-+", "--"})
        CHECK(std::abs(find(free, "closed_form_energy", b).difference()) <= 1e-12);
    const Discrepancy w = find(free, "saddle_center_frequency", "+-");
    CHECK(w.reference == doctest::Approx(0.7494).epsilon(1e-4));
    CHECK(w.computed == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-12));
    CHECK(find(free, "center_frequency_1", "++").reference == doctest::Approx(2.136).epsilon(1e-3));
    CHECK(find(free, "center_frequency_1", "++").computed == doctest::Approx(std::sqrt(2 + std::sqrt(2.0))));
    CHECK(find(free, "center_frequency_2", "++").reference == doctest::Approx(0.662).epsilon(1e-3));
    CHECK(find(free, "center_frequency_2", "++").computed == doctest::Approx(std::sqrt(2 - std::sqrt(2.0))));

    const Report torqued = build_fixed_points_report(scenario({{"torques.beta1", "1"}, {"torques.beta2", "0.5"}}));
    CHECK(std::abs(find(torqued, "closed_form_energy", "++").difference()) <= 1e-12);
    CHECK(find(torqued, "closed_form_energy", "--").difference() ==
          doctest::Approx(std::numbers::pi * 1.5).epsilon(1e-12));
}

TEST_CASE("simulate output") {
    const CommandResult res = cmd_simulate(scenario({{"integrator.horizon", "2"}, {"output.stride", "10"}}));
    CHECK(res.exit_code == kExitOk);
    std::istringstream in(data_lines(res.output));
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,theta1,p1,theta2,p2,energy,energy_error");
    double last = -1.0;
    int rows = 0;
    while (std::getline(in, line)) {
        const double t = std::stod(line.substr(0, line.find(',')));
        CHECK(t > last);
        last = t;
        ++rows;
    }
    CHECK(rows == 201);
    CHECK(last == 2.0);
    CHECK(res.output.find("# summary: samples=2001") != std::string::npos);

    const CommandResult trunc = cmd_simulate(scenario({{"integrator.max_steps", "10"}}));
    CHECK(trunc.exit_code == kExitError);
    CHECK(trunc.output.find("truncated") != std::string::npos);
}

TEST_CASE("portrait families") {
    SUBCASE("manifold plane separates libration from rotation") {
        const Scenario s = scenario({{"portrait.horizon", "15"}, {"output.format", "json"}});
        const Json doc = Json::parse(cmd_portrait(s).output);
        const double e_sep = separatrix_energy(s.params, ManifoldId::M1);
        int lib = 0, rot = 0;
        for (const Json& o : doc["orbits"]) {
            double lo = 1e300, hi = -1e300;
            for (const Json& row : o["rows"]) {
                lo = std::min(lo, row[1].get<double>());
                hi = std::max(hi, row[1].get<double>());
            }
            if (o["energy"].get<double>() < e_sep) {
                CHECK(o["family"] == "libration");
                CHECK(hi < std::numbers::pi);
                CHECK(lo > -std::numbers::pi);
                ++lib;
            } else {
                CHECK(o["family"] == "rotation");
                CHECK(hi > 2 * std::numbers::pi);
                ++rot;
            }
        }
        CHECK(lib > 0);
        CHECK(rot > 0);
    }
    SUBCASE("normal-ypy orbits stay near circles") {
        const Scenario s = scenario({{"portrait.plane", "normal-ypy"},
                                     {"portrait.radius", "1e-3"},
                                     {"portrait.horizon", "6"},
                                     {"output.format", "json"}});
        const Json doc = Json::parse(cmd_portrait(s).output);
        for (const Json& o : doc["orbits"]) {
            CHECK(o["family"] == "PurePeriodic");
            const auto& first = o["rows"].front();
            const double r0 = std::hypot(first[3].get<double>(), first[4].get<double>());
            for (const Json& row : o["rows"]) {
                CHECK(std::hypot(row[3].get<double>(), row[4].get<double>()) == doctest::Approx(r0).epsilon(1e-2));
                CHECK(std::hypot(row[1].get<double>(), row[2].get<double>()) <= 1e-2 * r0);
            }
        }
    }
    SUBCASE("normal-xpx orbits follow hyperbolae") {
        const Scenario s = scenario({{"portrait.plane", "normal-xpx"},
                                     {"portrait.radius", "1e-4"},
                                     {"portrait.horizon", "3"},
                                     {"output.format", "json"}});
        const Json doc = Json::parse(cmd_portrait(s).output);
        for (const Json& o : doc["orbits"]) {
            CHECK(o["family"] == "PureHyperbolic");
            const auto& first = o["rows"].front();
            const double h0 = first[2].get<double>() * first[2].get<double>() - first[1].get<double>() * first[1].get<double>();
            for (const Json& row : o["rows"]) {
                const double h = row[2].get<double>() * row[2].get<double>() - row[1].get<double>() * row[1].get<double>();
                CHECK(h == doctest::Approx(h0).epsilon(0.05));
            }
        }
    }
    SUBCASE("bad base point is an error") {
        CHECK_THROWS_AS(cmd_portrait(scenario({{"portrait.plane", "normal-xpx"}, {"portrait.branch", "++"}})),
                        ClassificationError);
    }
}

TEST_CASE("manifold-check reports the measured residual") {
    // The elbow does not stay vertical while the shoulder swings, so the
    // check fails for any amplitude off the equilibria.
    const CommandResult swing = cmd_manifold_check(scenario({{"manifold.amplitude", "0.3"}, {"output.format", "json"}}));
    const Json doc = Json::parse(swing.output);
    CHECK(doc["results"]["verdict"] == "fail");
    CHECK(doc["results"]["max_r_theta"].get<double>() > 0.1);
    CHECK(swing.exit_code == kExitWarning);

    const CommandResult rest = cmd_manifold_check(scenario({{"manifold.amplitude", "0"}, {"output.format", "json"}}));
    CHECK(Json::parse(rest.output)["results"]["verdict"] == "pass");
    CHECK(rest.exit_code == kExitOk);
}

TEST_CASE("normal-form output") {
    const Json doc = Json::parse(cmd_normal_form(scenario({{"output.format", "json"}})).output);
    const Json& r = doc["results"];
    CHECK(r["nu_over_omega0"].get<double>() == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-12));
    CHECK(r["omega_over_omega0"].get<double>() == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-12));
    CHECK(r["symplectic_defect"].get<double>() <= 1e-10);
    CHECK(r["epsilon"].get<double>() == -1.0);
    CHECK(r["reference_frequency"].get<double>() == doctest::Approx(0.7494).epsilon(1e-4));
    CHECK(r.contains("reference_transform_symplectic_defect"));
}

TEST_CASE("sweep") {
    SUBCASE("existence region is the rectangle") {
        const Scenario s = scenario({{"sweep.beta1_min", "-3"}, {"sweep.beta1_max", "3"},
                                     {"sweep.beta2_min", "-3"}, {"sweep.beta2_max", "3"},
                                     {"sweep.n1", "41"}, {"sweep.n2", "41"}});
        for (const SweepCell& c : sweep_cells(s)) {
            const bool inside = std::abs(c.beta1) <= 2.0 && std::abs(c.beta2) <= 1.0;
            for (bool e : c.exists) CHECK(e == inside);
            if (inside && !c.on_boundary[0]) {
                CHECK(c.kinds[0] == "PureCenter");
                CHECK(c.kinds[1] == "SaddleCenter");
                CHECK(c.kinds[2] == "SaddleCenter");
                CHECK(c.kinds[3] == "PureSaddle");
            }
        }
    }
    SUBCASE("row-major order") {
        const auto cells = sweep_cells(scenario({{"sweep.n1", "3"}, {"sweep.n2", "4"}}));
        REQUIRE(cells.size() == 12);
        CHECK(cells[0].beta1 == -3.0);
        CHECK(cells[0].beta2 == -1.5);
        CHECK(cells[1].beta1 == -3.0);
        CHECK(cells[3].beta2 == 1.5);
        CHECK(cells[4].beta1 == 0.0);
    }
    SUBCASE("min |lambda| shrinks toward the boundary") {
        double previous = 1e300;
        for (const char* b1 : {"1.9", "1.99", "1.998", "1.9998"}) {
            const auto cells = sweep_cells(scenario({{"sweep.beta1_min", b1}, {"sweep.beta1_max", "2.5"},
                                                     {"sweep.beta2_min", "0"}, {"sweep.beta2_max", "0.5"},
                                                     {"sweep.n1", "2"}, {"sweep.n2", "2"}}));
            CHECK(cells[0].min_abs_lambda < previous);
            previous = cells[0].min_abs_lambda;
        }
        CHECK(previous < 0.2);
    }
}

TEST_CASE("determinism") {
    const std::vector<std::pair<std::string, Scenario>> runs = {
        {"fixed-points", scenario({{"torques.beta1", "0.4"}})},
        {"classify", scenario({{"state.theta1", "0.2"}})},
        {"simulate", scenario({{"integrator.horizon", "3"}})},
        {"portrait", scenario({{"portrait.horizon", "2"}, {"portrait.n", "4"}})},
        {"manifold-check", scenario({{"manifold.horizon", "3"}})},
        {"normal-form", scenario({{"output.format", "json"}})},
        {"sweep", scenario({{"sweep.n1", "15"}, {"sweep.n2", "11"}, {"sweep.threads", "4"}})},
    };
    for (const auto& [name, s] : runs) {
        CAPTURE(name);
        CHECK(run_command(name, s).output == run_command(name, s).output);
    }
    // Thread count changes only the echoed setting, never the data.
    const Scenario one = scenario({{"sweep.n1", "21"}, {"sweep.n2", "13"}, {"sweep.threads", "1"}});
    const Scenario many = scenario({{"sweep.n1", "21"}, {"sweep.n2", "13"}, {"sweep.threads", "7"}});
    CHECK(data_lines(cmd_sweep(one).output) == data_lines(cmd_sweep(many).output));
    CHECK_THROWS_AS(run_command("nope", one), UsageError);
}

TEST_CASE("command-line front end") {
    TempDir tmp;
    const std::string a = (tmp.path / "a.csv").string(), b = (tmp.path / "b.csv").string();
    const std::string ja = (tmp.path / "a.json").string(), jb = (tmp.path / "b.json").string();

    CHECK(run_cli("fixed-points --m 1 --L 1 --g 9.81 --out " + a) == 0);
    CHECK(run_cli("fixed-points --config " + a + " --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));

    CHECK(run_cli("simulate --beta1 0.2 --set integrator.horizon=1 --format json --out " + ja) == 0);
    CHECK(run_cli("simulate --config " + ja + " --out " + jb) == 0);
    CHECK(slurp(ja) == slurp(jb));
    CHECK(Json::parse(slurp(ja))["scenario"]["torques"]["beta1"].get<double>() == 0.2);

    // Flags override the file.
    std::ofstream(tmp.path / "c.ini") << "[arm]\ng = 9.81\n[torques]\nbeta1 = 5\n";
    CHECK(run_cli("fixed-points --config " + (tmp.path / "c.ini").string() + " --beta1 25 --out " + a) == 2);
    CHECK(slurp(a).find("#@ beta1 = 25") != std::string::npos);
    CHECK(slurp(a).find("#@ g = 9.8100000000000005") != std::string::npos);

    CHECK(run_cli("fixed-points --m 0") == 1);
    CHECK(run_cli("fixed-points --set arm.mass=1") == 1);
    CHECK(run_cli("fixed-points --format xml") == 1);
    CHECK(run_cli("fixed-points --config /nonexistent/file") == 1);
    CHECK(run_cli("no-such-command") == 1);
    CHECK(run_cli("normal-form --set normal_form.branch=++") == 1);
    CHECK(run_cli("--help > /dev/null") == 0);
}
