#include "totcurv/report.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace totcurv;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path.string();
}

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

VerificationRow sample_row() {
    VerificationRow r;
    r.scenario = "sphere_annulus(4,0.5,1)";
    r.dim = 4;
    r.r = 2;
    r.lhs = 1.0 / 3.0;
    r.rhs = 0.33333333333333326;
    r.abs_error = 5.551115123125783e-17;
    r.rel_error = 1.6653345369377348e-16;
    r.closed_form_lhs = std::acos(-1.0);
    r.lhs_quadrature_error = 1e-300;
    r.rhs_quadrature_error = std::numeric_limits<double>::quiet_NaN();
    r.surface_m = 64;
    r.t_nodes = 32;
    r.nodes = 123456789;
    r.convergence_order = std::nullopt;
    r.tolerance = 1e-4;
    r.absolute_test = false;
    r.pass = true;
    r.wall_time = 0.25;
    r.note = "discrepancy at rounding floor, \"quoted\"";
    return r;
}

} // namespace

TEST_CASE("pass rule and near-zero switch") {
    const Tolerances tol{1e-6, 1e-9, 1e-6};
    bool absolute = true;
    CHECK(row_passes(1.0, 1.0 + 5e-7, tol, &absolute));
    CHECK_FALSE(absolute);
    CHECK_FALSE(row_passes(1.0, 1.0 + 2e-6, tol));
    CHECK(row_passes(-3.0, -3.0 - 2e-6, tol));
    CHECK(row_passes(1e-12, -5e-10, tol, &absolute));
    CHECK(absolute);
    CHECK_FALSE(row_passes(0.0, 5e-9, tol, &absolute));
    CHECK(absolute);
    // Above the switch a relative test applies even for small values.
    CHECK_FALSE(row_passes(2e-6, 1e-6, tol, &absolute));
    CHECK_FALSE(absolute);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(row_passes(nan, 1.0, tol));
    CHECK_FALSE(row_passes(1.0, nan, tol));
}

TEST_CASE("r lists") {
    CHECK(parse_r_list("0,1,2") == std::vector<int>{0, 1, 2});
    CHECK(parse_r_list("0-3") == std::vector<int>{0, 1, 2, 3});
    CHECK(parse_r_list("3,0-1") == std::vector<int>{0, 1, 3});
    CHECK(parse_r_list("1,1") == std::vector<int>{1});
    CHECK_THROWS_AS(parse_r_list("3-1"), ConfigError);
    CHECK_THROWS_AS(parse_r_list("-1"), ConfigError);
    CHECK_THROWS_AS(parse_r_list("a"), ConfigError);
}

TEST_CASE("command and format names") {
    CHECK(parse_command(to_string(Command::verify)) == Command::verify);
    CHECK(parse_command(to_string(Command::pointwise)) == Command::pointwise);
    CHECK(parse_format(to_string(Format::json)) == Format::json);
    CHECK(parse_format(to_string(Format::csv)) == Format::csv);
    CHECK_THROWS_AS(parse_command("prove"), ConfigError);
    CHECK_THROWS_AS(parse_format("xml"), ConfigError);
}

TEST_CASE("JSON round trip is lossless") {
    VerificationReport rep;
    rep.config.scenarios = {{"sphere_annulus", {{"n", 4}}}, {"euclid_shell", {}}};
    rep.config.rs = {0, 2};
    rep.config.tol = 1e-4;
    rep.config.seed = 18446744073709551557ull;
    rep.config.format = Format::json;
    rep.config.out = "x.json";
    rep.rows.push_back(sample_row());
    auto failed = sample_row();
    failed.lhs = failed.rhs = std::numeric_limits<double>::quiet_NaN();
    failed.pass = false;
    failed.convergence_order = 3.25;
    failed.closed_form_lhs = std::nullopt;
    rep.rows.push_back(failed);

    const auto back = report_from_json(to_json(rep));
    CHECK(to_json(back) == to_json(rep));
    CHECK(back.config.seed == rep.config.seed);
    CHECK(*back.config.tol == 1e-4);
    CHECK(back.config.scenarios.size() == 2);
    CHECK(back.config.scenarios[0].params.at("n") == 4.0);
    REQUIRE(back.rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        const auto &a = rep.rows[i], &b = back.rows[i];
        CHECK(a.scenario == b.scenario);
        CHECK(same(a.lhs, b.lhs));
        CHECK(same(a.rhs, b.rhs));
        CHECK(same(a.rhs_quadrature_error, b.rhs_quadrature_error));
        CHECK(a.lhs_quadrature_error == b.lhs_quadrature_error);
        CHECK(a.closed_form_lhs == b.closed_form_lhs);
        CHECK(a.convergence_order == b.convergence_order);
        CHECK(a.nodes == b.nodes);
        CHECK(a.pass == b.pass);
        CHECK(a.note == b.note);
    }
    CHECK_FALSE(back.all_pass());

    VerificationReport pw;
    pw.config.command = Command::pointwise;
    PointwiseRow p;
    p.scenario = "euclid_shell(3,0.5,1)";
    p.dim = 3;
    p.slope = 1.9999971;
    p.max_residual = 2.5e-9;
    p.pass = true;
    pw.pointwise.push_back(p);
    const auto pb = report_from_json(to_json(pw));
    CHECK(pb.config.command == Command::pointwise);
    REQUIRE(pb.pointwise.size() == 1);
    CHECK(pb.pointwise[0].slope == p.slope);
    CHECK(pb.pointwise[0].max_residual == p.max_residual);
    CHECK(pb.all_pass());

    CHECK_THROWS_AS(report_from_json("{"), ConfigError);
    CHECK_THROWS_AS(report_from_json("{\"rows\": 3}"), ConfigError);
}

TEST_CASE("verify run on the Euclidean shell") {
    RunConfig cfg;
    cfg.scenarios = {{"euclid_shell", {}}};
    cfg.grid = 16;
    cfg.t_nodes = 16;
    const auto rep = run(cfg);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.all_pass());
    for (int r = 0; r < 3; ++r) CHECK(rep.rows[r].r == r);
    CHECK(rep.rows[0].lhs == doctest::Approx(3 * std::acos(-1.0)).epsilon(1e-10));

    const auto again = run(cfg, Execution::serial);
    for (int r = 0; r < 3; ++r) CHECK(again.rows[r].lhs == doctest::Approx(rep.rows[r].lhs).epsilon(1e-13));
    const auto third = run(cfg);
    for (int r = 0; r < 3; ++r) CHECK(third.rows[r].lhs == rep.rows[r].lhs);

    const std::string csv = to_csv(rep);
    CHECK(csv.rfind("scenario,n,r,lhs,rhs,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK_FALSE(to_table(rep).empty());
}

TEST_CASE("rows are sorted by scenario and r; r beyond n-1 is skipped") {
    RunConfig cfg;
    cfg.scenarios = {{"sphere_annulus", {{"n", 3}}}, {"euclid_shell", {}}};
    cfg.rs = {2, 0, 3};
    cfg.grid = 8;
    cfg.t_nodes = 8;
    const auto rep = run(cfg);
    REQUIRE(rep.rows.size() == 4);
    CHECK(rep.rows[0].scenario < rep.rows[2].scenario);
    CHECK(rep.rows[0].r == 0);
    CHECK(rep.rows[1].r == 2);
    CHECK(rep.rows[2].r == 0);
    CHECK(rep.rows[3].r == 2);
}

TEST_CASE("an empty scenario list gives an empty passing report") {
    const auto rep = run(RunConfig{});
    CHECK(rep.rows.empty());
    CHECK(rep.all_pass());
    CHECK(report_from_json(to_json(rep)).rows.empty());
}

TEST_CASE("unknown scenarios propagate") {
    RunConfig cfg;
    cfg.scenarios = {{"klein_bottle", {}}};
    CHECK_THROWS_AS(run(cfg), UnknownScenarioError);
}

TEST_CASE("pointwise run") {
    RunConfig cfg;
    cfg.command = Command::pointwise;
    cfg.scenarios = {{"warped_tilted", {}}};
    cfg.rs = {2};
    cfg.points = 5;
    const auto rep = run(cfg);
    REQUIRE(rep.pointwise.size() == 1);
    CHECK(rep.pointwise[0].pass);
    CHECK(rep.pointwise[0].points == 5);
    CHECK(to_csv(rep).rfind("scenario,n,r,points,h,", 0) == 0);
}

TEST_CASE("INI configuration") {
    const auto path = temp_file("totcurv_test.ini",
                                "[run]\n"
                                "command = pointwise\n"
                                "r = 0-2\n"
                                "grid = 24\n"
                                "tol = 1e-5\n"
                                "seed = 7\n"
                                "points = 12\n"
                                "format = json\n"
                                "out = out.json\n"
                                "\n"
                                "[scenario.first]\n"
                                "type = sphere_annulus\n"
                                "n = 3\n"
                                "rho0 = 0.4\n"
                                "\n"
                                "[scenario.second]\n"
                                "type = euclid_shell\n");
    const auto cfg = load_config(path);
    CHECK(cfg.command == Command::pointwise);
    CHECK(cfg.rs == std::vector<int>{0, 1, 2});
    CHECK(cfg.grid == 24);
    CHECK(*cfg.tol == 1e-5);
    CHECK(cfg.seed == 7);
    CHECK(cfg.points == 12);
    CHECK(cfg.format == Format::json);
    CHECK(cfg.out == "out.json");
    REQUIRE(cfg.scenarios.size() == 2);
    CHECK(cfg.scenarios[0].name == "sphere_annulus");
    CHECK(cfg.scenarios[0].params.at("rho0") == 0.4);
    CHECK(cfg.scenarios[1].name == "euclid_shell");

    CHECK_THROWS_AS(load_config(temp_file("totcurv_bad1.ini", "[run]\ncolour = red\n")), ConfigError);
    CHECK_THROWS_AS(load_config(temp_file("totcurv_bad2.ini", "[other]\nx = 1\n")), ConfigError);
    CHECK_THROWS_AS(load_config(temp_file("totcurv_bad3.ini", "[scenario.a]\nn = 3\n")), ConfigError);
    CHECK_THROWS_AS(load_config(temp_file("totcurv_bad4.ini", "[run]\ngrid = -1\n")), ConfigError);
    CHECK_THROWS_AS(load_config(temp_file("totcurv_bad5.ini", "[run]\nt_nodes = 2.5\n")), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/totcurv.ini"), ConfigError);
}
