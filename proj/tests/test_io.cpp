#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <cstring>
#include <sstream>

#include "geostat/io.hpp"

using namespace geostat;

namespace {

Trajectory sample_trajectory() {
    IntegratorConfig cfg;
    cfg.horizon = 1.0;
    return integrate(ModelId::gaussian_quantum,
                     make_state(ModelId::gaussian_quantum, {0.1, 0.9, 0.2}, {0.7, 0.3, -0.4}), cfg);
}

std::vector<std::vector<double>> parse_csv_rows(const std::string& csv) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) row.push_back(std::strtod(field.c_str(), nullptr));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

TEST_CASE("format_g17 round-trips doubles exactly") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.718281828459045, 135135.0, 1e17 + 1}) {
        const std::string s = format_g17(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("trajectory JSON round trip is bit-identical") {
    const Trajectory t = sample_trajectory();
    IntegratorConfig cfg;
    cfg.horizon = 1.0;
    const json j = trajectory_to_json(t, cfg);
    const std::string dumped = j.dump();
    const Trajectory back = trajectory_from_json(json::parse(dumped));

    CHECK(back.model == t.model);
    CHECK(back.stop_reason == t.stop_reason);
    REQUIRE(back.samples.size() == t.samples.size());
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
        CHECK(std::memcmp(&back.samples[i].time, &t.samples[i].time, sizeof(double)) == 0);
        for (int c = 0; c < 3; ++c) {
            CHECK(std::memcmp(&back.samples[i].point.coords[static_cast<std::size_t>(c)],
                              &t.samples[i].point.coords[static_cast<std::size_t>(c)],
                              sizeof(double)) == 0);
            CHECK(std::memcmp(&back.samples[i].velocity.components[static_cast<std::size_t>(c)],
                              &t.samples[i].velocity.components[static_cast<std::size_t>(c)],
                              sizeof(double)) == 0);
        }
    }
    CHECK(back.conserved_drift.C == t.conserved_drift.C);
    CHECK(back.conserved_initial.B.value() == t.conserved_initial.B.value());
}

TEST_CASE("trajectory CSV fields re-parse exactly") {
    const Trajectory t = sample_trajectory();
    const std::string csv = trajectory_to_csv(t);
    CHECK(csv.find("# model: gaussian-quantum") != std::string::npos);
    CHECK(csv.find("# columns: t,mu,sigma,alpha,mudot,sigmadot,alphadot,A,B,C,entropy") !=
          std::string::npos);

    const auto rows = parse_csv_rows(csv);
    REQUIRE(rows.size() == t.samples.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 11);
        CHECK(rows[i][0] == t.samples[i].time);
        CHECK(rows[i][1] == t.samples[i].point.coords[0]);
        CHECK(rows[i][2] == t.samples[i].point.coords[1]);
        CHECK(rows[i][3] == t.samples[i].point.coords[2]);
        CHECK(rows[i][4] == t.samples[i].velocity.components[0]);
        const ConservedSet cs = conserved_quantities(t.model, t.samples[i]);
        CHECK(rows[i][7] == cs.A.value());
        CHECK(rows[i][8] == cs.B.value());
        CHECK(rows[i][9] == cs.C);
    }
}

TEST_CASE("per-model CSV column sets") {
    CHECK(join(trajectory_columns(ModelId::bernoulli_classical), ",") == "t,p,pdot,C,entropy");
    CHECK(join(trajectory_columns(ModelId::qubit_quantum), ",") ==
          "t,p,phi,pdot,phidot,A,C,entropy");
    CHECK(join(trajectory_columns(ModelId::gaussian_classical), ",") ==
          "t,mu,sigma,mudot,sigmadot,A,C,entropy");
}

TEST_CASE("portrait serialization") {
    IntegratorConfig cfg;
    cfg.horizon = 2.0;
    std::vector<GeodesicState> family;
    ConservedSet with_b;
    with_b.A = 1.0;
    with_b.B = 1.0;
    with_b.C = 2.0;
    ConservedSet no_b;
    no_b.A = 1.0;
    no_b.B = 0.0;
    no_b.C = 2.0;
    family.push_back(state_from_constants(ModelId::gaussian_quantum, with_b));
    family.push_back(state_from_constants(ModelId::gaussian_quantum, no_b));
    const PhasePortrait p = phase_portrait(ModelId::gaussian_quantum, family, cfg);

    const std::string csv = portrait_to_csv(p);
    CHECK(csv.find("# plane: sigma,sigmadot") != std::string::npos);
    CHECK(csv.find("dashed=1") != std::string::npos);  // B != 0 curve
    CHECK(csv.find("dashed=0") != std::string::npos);  // B == 0 curve

    const std::string svg = portrait_to_svg(p);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);

    const json j = portrait_to_json(p);
    CHECK(j.at("curves").size() == 2);
    CHECK(j.at("curves")[0].at("dashed").get<bool>());
    CHECK_FALSE(j.at("curves")[1].at("dashed").get<bool>());
}

TEST_CASE("potential serialization with the minimum annotation") {
    ConservedSet cs;
    cs.A = 1.0;
    cs.B = 1.0;
    cs.C = 2.0;
    const PotentialProfile prof = potential_profile(ModelId::gaussian_quantum, -2.0, 2.0, 41, cs);
    const std::vector<PotentialProfile> profiles{prof};
    const std::string csv = potential_to_csv(profiles);
    CHECK(csv.find("y_min=") != std::string::npos);
    CHECK(csv.find("u_min=") != std::string::npos);

    const std::string svg = potential_to_svg(profiles, true);
    CHECK(svg.find("(log)") != std::string::npos);

    const json j = potential_to_json(profiles);
    CHECK(j.at("profiles")[0].at("u_min").get<double>() ==
          Catch::Approx(1.4142135623730951).margin(1e-12));
}

TEST_CASE("SVG output is deterministic") {
    const Trajectory t = sample_trajectory();
    CHECK(trajectory_to_svg(t) == trajectory_to_svg(t));
    CHECK(entropy_series_to_svg(t) == entropy_series_to_svg(t));
}

TEST_CASE("svg_plot rejects log axes without positive values") {
    SvgCurve c;
    c.x = {0.0, 1.0};
    c.y = {-1.0, -2.0};
    CHECK_THROWS_AS(svg_plot({c}, "x", "y", true), InvalidArgument);
}

TEST_CASE("run config JSON validation") {
    RunConfig cfg = default_run_config(ModelId::qubit_quantum);
    SECTION("known keys are applied") {
        apply_initial_json(cfg, json{{"p", 0.3}, {"phidot", 2.0}});
        CHECK(cfg.coords[0] == 0.3);
        CHECK(cfg.velocity[1] == 2.0);
    }
    SECTION("unknown coordinate keys are rejected") {
        CHECK_THROWS_AS(apply_initial_json(cfg, json{{"sigma", 1.0}}), InvalidArgument);
        CHECK_THROWS_AS(apply_initial_json(cfg, json{{"pdotdot", 1.0}}), InvalidArgument);
    }
    SECTION("integrator overrides") {
        apply_integrator_json(cfg.integrator, json{{"step_size", 5e-4}, {"horizon", 3.0}});
        CHECK(cfg.integrator.step_size == 5e-4);
        CHECK(cfg.integrator.horizon == 3.0);
        CHECK_THROWS_AS(apply_integrator_json(cfg.integrator, json{{"stepsize", 1.0}}),
                        InvalidArgument);
    }
}

TEST_CASE("verification report rendering") {
    VerificationReport r;
    r.entries.push_back(DeviationEntry{ModelId::bernoulli_classical, 1e-12, 0.0});
    r.entries.push_back(DeviationEntry{ModelId::gaussian_classical, 3e-4, 0.0});
    CHECK_FALSE(r.pass());
    const std::string text = verification_report_text(r);
    CHECK(text.find("PASS") != std::string::npos);
    CHECK(text.find("FAIL") != std::string::npos);
    CHECK(text.find("overall: FAIL") != std::string::npos);
    const json j = verification_report_to_json(r);
    CHECK_FALSE(j.at("pass").get<bool>());
    CHECK(j.at("entries")[0].at("pass").get<bool>());
}
