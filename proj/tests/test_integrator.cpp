#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "geostat/integrator.hpp"

using namespace geostat;

namespace {

constexpr double kPi = std::numbers::pi;

ConservedSet constants(std::optional<double> a, std::optional<double> b, double c) {
    ConservedSet cs;
    cs.A = a;
    cs.B = b;
    cs.C = c;
    return cs;
}

double radial(const GeodesicState& s, ModelId m) {
    return s.point.coords[static_cast<std::size_t>(radial_index(m))];
}

}  // namespace

TEST_CASE("bernoulli geodesics run at constant y-velocity into the boundary") {
    // Exact solution: p(t) = (1 + sin(y0 + sqrt(C) t)) / 2 until the chart edge.
    const GeodesicState s0 = make_state(ModelId::bernoulli_classical, {0.5}, {0.5});
    const Trajectory t = integrate(ModelId::bernoulli_classical, s0);

    CHECK(t.stop_reason == StopReason::boundary);
    const double t_stop = t.samples.back().time;
    CHECK(std::abs(t_stop - kPi / 2.0) <= 0.01);

    // last sample sits just outside the default 1e-6 margin
    const double p_final = t.samples.back().point.coords[0];
    CHECK(p_final > 1.0 - 1e-5);
    CHECK(p_final < 1.0 - 0.5e-6);

    double max_err = 0.0, max_ydev = 0.0;
    for (const GeodesicState& s : t.samples) {
        const double exact = 0.5 * (1.0 + std::sin(s.time));
        max_err = std::max(max_err, std::abs(s.point.coords[0] - exact));
        max_ydev = std::max(max_ydev, std::abs(y_velocity(ModelId::bernoulli_classical, s) - 1.0));
    }
    CHECK(max_err <= 1e-7);
    CHECK(max_ydev <= 1e-8);
    CHECK(drift_report(t).max_drift() <= 1e-6);
}

TEST_CASE("qubit orbits follow the exact harmonic law sin y(t)") {
    // With s = sin y: sddot = -8C s, so s(t) = s_b sin(omega t) from the
    // center, with omega = sqrt(8C) and s_b^2 = 1 - 2A^2/C.
    const GeodesicState s0 =
        state_from_constants(ModelId::qubit_quantum, constants(0.5, std::nullopt, 1.0));
    const Trajectory t = integrate(ModelId::qubit_quantum, s0);
    CHECK(t.stop_reason == StopReason::user_horizon);

    const double omega = std::sqrt(8.0);
    const double sb = std::sqrt(0.5);
    double max_err = 0.0;
    for (const GeodesicState& s : t.samples) {
        const double exact = 0.5 * (1.0 + sb * std::sin(omega * s.time));
        max_err = std::max(max_err, std::abs(s.point.coords[0] - exact));
    }
    CHECK(max_err <= 1e-8);
}

TEST_CASE("qubit equilibrium stays put") {
    const GeodesicState s0 = make_state(ModelId::qubit_quantum, {0.5, 0.0}, {0.0, 1.0});
    const Trajectory t = integrate(ModelId::qubit_quantum, s0);
    for (const GeodesicState& s : t.samples) CHECK(std::abs(s.point.coords[0] - 0.5) < 1e-9);
    CHECK(drift_report(t).max_drift() <= 1e-12);
}

TEST_CASE("free gaussian dispersion grows exponentially") {
    // A = 0 makes y free: sigma(t) = sigma0 e^{ydot t} exactly.
    IntegratorConfig cfg;
    cfg.horizon = 3.0;
    const GeodesicState s0 = make_state(ModelId::gaussian_classical, {0.0, 1.0}, {0.0, 1.0});
    const Trajectory t = integrate(ModelId::gaussian_classical, s0, cfg);
    CHECK(t.stop_reason == StopReason::user_horizon);
    for (const GeodesicState& s : t.samples) {
        const double exact = std::exp(s.time);
        CHECK(std::abs(s.point.coords[1] - exact) / exact <= 1e-6);
        CHECK(s.point.coords[0] == 0.0);  // mu frozen
    }
}

TEST_CASE("coarse steps near the boundary raise DriftExceeded") {
    IntegratorConfig cfg;
    cfg.step_size = 0.1;
    const GeodesicState s0 = make_state(ModelId::bernoulli_classical, {0.99}, {0.1});
    CHECK_THROWS_AS(integrate(ModelId::bernoulli_classical, s0, cfg), DriftExceeded);
}

TEST_CASE("default-config trajectories keep conserved drift below 1e-6") {
    const Trajectory tq = integrate(
        ModelId::qubit_quantum, state_from_constants(ModelId::qubit_quantum, constants(0.4, std::nullopt, 1.2)));
    CHECK(drift_report(tq).max_drift() <= 1e-6);

    const Trajectory tg = integrate(
        ModelId::gaussian_quantum,
        state_from_constants(ModelId::gaussian_quantum, constants(1.0, 1.0, 2.0)));
    CHECK(drift_report(tg).max_drift() <= 1e-6);

    // the running audit and the post-hoc report agree
    CHECK(tq.conserved_drift.max_drift() == drift_report(tq).max_drift());
    CHECK(tg.conserved_drift.C == drift_report(tg).C);
}

TEST_CASE("halving the step reduces conserved drift at fourth order") {
    for (double base : {4e-3}) {
        IntegratorConfig coarse;
        coarse.step_size = base;
        IntegratorConfig fine;
        fine.step_size = base / 2.0;

        const GeodesicState s0 =
            state_from_constants(ModelId::qubit_quantum, constants(0.5, std::nullopt, 1.0));
        const double d_coarse =
            integrate(ModelId::qubit_quantum, s0, coarse).conserved_drift.max_drift();
        const double d_fine =
            integrate(ModelId::qubit_quantum, s0, fine).conserved_drift.max_drift();
        CHECK(d_coarse >= 8.0 * d_fine);

        const GeodesicState g0 =
            state_from_constants(ModelId::gaussian_quantum, constants(1.0, 1.0, 2.0));
        const double g_coarse =
            integrate(ModelId::gaussian_quantum, g0, coarse).conserved_drift.max_drift();
        const double g_fine =
            integrate(ModelId::gaussian_quantum, g0, fine).conserved_drift.max_drift();
        CHECK(g_coarse >= 8.0 * g_fine);
    }
}

TEST_CASE("turning points land on the analytic orbit bounds") {
    SECTION("gaussian-classical turning at sigma_m = sqrt(C)/|A|") {
        const GeodesicState s0 =
            state_from_constants(ModelId::gaussian_classical, constants(1.0, std::nullopt, 2.0));
        const Trajectory t = integrate(ModelId::gaussian_classical, s0);
        const auto events = detect_turning_points(t, "sigma");
        REQUIRE_FALSE(events.empty());
        CHECK(events.front().value == Catch::Approx(std::numbers::sqrt2).margin(1e-4));
        CHECK(events.front().coordinate == "sigma");
    }
    SECTION("gaussian-quantum turnings alternate between the sigma bounds") {
        IntegratorConfig cfg;
        cfg.horizon = 20.0;
        const GeodesicState s0 =
            state_from_constants(ModelId::gaussian_quantum, constants(1.0, 1.0, 2.0));
        const Trajectory t = integrate(ModelId::gaussian_quantum, s0, cfg);
        const auto events = detect_turning_points(t, "sigma");
        REQUIRE(events.size() >= 5);
        const double lo = 0.5411961001461970;  // sqrt((2 - sqrt 2)/2)
        const double hi = 1.3065629648763766;  // sqrt((2 + sqrt 2)/2)
        for (std::size_t i = 0; i < events.size(); ++i) {
            const double expected = (i % 2 == 0) ? hi : lo;  // starts moving outward
            CHECK(events[i].value == Catch::Approx(expected).margin(1e-4));
        }
    }
    SECTION("bernoulli orbits are monotone") {
        const Trajectory t =
            integrate(ModelId::bernoulli_classical, make_state(ModelId::bernoulli_classical, {0.4}, {0.2}));
        CHECK(detect_turning_points(t, "p").empty());
    }
    SECTION("unknown coordinates are rejected") {
        const Trajectory t =
            integrate(ModelId::bernoulli_classical, make_state(ModelId::bernoulli_classical, {0.4}, {0.2}));
        CHECK_THROWS_AS(detect_turning_points(t, "sigma"), InvalidArgument);
    }
}

TEST_CASE("confinement: bounded orbits never leave their bounds nor touch the edges") {
    SECTION("qubit") {
        IntegratorConfig cfg;
        cfg.horizon = 20.0;
        const ConservedSet cs = constants(0.5, std::nullopt, 1.0);
        const OrbitBounds b = orbit_bounds(ModelId::qubit_quantum, cs);
        const Trajectory t =
            integrate(ModelId::qubit_quantum, state_from_constants(ModelId::qubit_quantum, cs), cfg);
        for (const GeodesicState& s : t.samples) {
            const double p = s.point.coords[0];
            CHECK(p >= b.lower - 1e-6);
            CHECK(p <= b.upper + 1e-6);
            CHECK(p > 1e-3);
            CHECK(p < 1.0 - 1e-3);
        }
    }
    SECTION("gaussian-quantum") {
        IntegratorConfig cfg;
        cfg.horizon = 20.0;
        const ConservedSet cs = constants(1.0, 1.0, 2.0);
        const OrbitBounds b = orbit_bounds(ModelId::gaussian_quantum, cs);
        const Trajectory t = integrate(ModelId::gaussian_quantum,
                                       state_from_constants(ModelId::gaussian_quantum, cs), cfg);
        for (const GeodesicState& s : t.samples) {
            const double sg = s.point.coords[1];
            CHECK(sg >= b.lower - 1e-6);
            CHECK(sg <= b.upper + 1e-6);
        }
    }
}

TEST_CASE("classical flows are totally geodesic inside the quantum models") {
    SECTION("qubit with phidot = 0 reproduces the bernoulli flow") {
        IntegratorConfig cfg;
        cfg.horizon = 3.0;
        const Trajectory tq = integrate(
            ModelId::qubit_quantum, make_state(ModelId::qubit_quantum, {0.3, 0.7}, {0.2, 0.0}), cfg);
        const Trajectory tb = integrate(
            ModelId::bernoulli_classical, make_state(ModelId::bernoulli_classical, {0.3}, {0.2}), cfg);
        REQUIRE(tq.samples.size() == tb.samples.size());
        for (std::size_t i = 0; i < tq.samples.size(); ++i) {
            CHECK(std::abs(tq.samples[i].point.coords[1] - 0.7) <= 1e-10);  // phi frozen
            CHECK(std::abs(tq.samples[i].point.coords[0] - tb.samples[i].point.coords[0]) <= 1e-6);
            CHECK(std::abs(tq.samples[i].velocity.components[0] -
                           tb.samples[i].velocity.components[0]) <= 1e-6);
        }
    }
    SECTION("gaussian-quantum with alphadot = 0 reproduces the classical flow") {
        IntegratorConfig cfg;
        cfg.horizon = 5.0;
        const Trajectory tq = integrate(
            ModelId::gaussian_quantum,
            make_state(ModelId::gaussian_quantum, {0.2, 0.8, 0.3}, {0.5, -0.3, 0.0}), cfg);
        const Trajectory tc = integrate(
            ModelId::gaussian_classical,
            make_state(ModelId::gaussian_classical, {0.2, 0.8}, {0.5, -0.3}), cfg);
        REQUIRE(tq.samples.size() == tc.samples.size());
        for (std::size_t i = 0; i < tq.samples.size(); ++i) {
            CHECK(std::abs(tq.samples[i].point.coords[2] - 0.3) <= 1e-10);  // alpha frozen
            for (int c = 0; c < 2; ++c) {
                CHECK(std::abs(tq.samples[i].point.coords[static_cast<std::size_t>(c)] -
                               tc.samples[i].point.coords[static_cast<std::size_t>(c)]) <= 1e-6);
                CHECK(std::abs(tq.samples[i].velocity.components[static_cast<std::size_t>(c)] -
                               tc.samples[i].velocity.components[static_cast<std::size_t>(c)]) <=
                      1e-6);
            }
        }
    }
}

TEST_CASE("time reversal retraces the trajectory") {
    IntegratorConfig cfg;
    cfg.horizon = 4.0;
    for (ModelId m : {ModelId::qubit_quantum, ModelId::gaussian_quantum}) {
        const ConservedSet cs = m == ModelId::qubit_quantum ? constants(0.4, std::nullopt, 1.0)
                                                            : constants(1.0, 1.0, 2.0);
        const Trajectory fwd = integrate(m, state_from_constants(m, cs), cfg);
        REQUIRE(fwd.stop_reason == StopReason::user_horizon);

        GeodesicState turn = fwd.samples.back();
        for (double& v : turn.velocity.components) v = -v;
        turn.time = 0.0;
        const Trajectory bwd = integrate(m, turn, cfg);
        REQUIRE(bwd.samples.size() == fwd.samples.size());

        const std::size_t n = fwd.samples.size();
        for (std::size_t i = 0; i < n; ++i)
            for (int c = 0; c < model_dim(m); ++c)
                CHECK(std::abs(bwd.samples[i].point.coords[static_cast<std::size_t>(c)] -
                               fwd.samples[n - 1 - i].point.coords[static_cast<std::size_t>(c)]) <=
                      1e-8);
    }
}

TEST_CASE("trajectory bookkeeping") {
    const Trajectory t =
        integrate(ModelId::bernoulli_classical, make_state(ModelId::bernoulli_classical, {0.5}, {0.5}));
    SECTION("samples are strictly increasing in time") {
        for (std::size_t i = 1; i < t.samples.size(); ++i)
            CHECK(t.samples[i].time > t.samples[i - 1].time);
    }
    SECTION("every sample keeps at least half the boundary margin") {
        for (const GeodesicState& s : t.samples)
            CHECK(boundary_distance(ModelId::bernoulli_classical, s.point) >= 0.5e-6);
    }
    SECTION("max_steps stop") {
        IntegratorConfig cfg;
        cfg.max_steps = 10;
        const Trajectory short_t = integrate(
            ModelId::qubit_quantum, make_state(ModelId::qubit_quantum, {0.5, 0.0}, {0.0, 1.0}), cfg);
        CHECK(short_t.stop_reason == StopReason::max_steps);
        CHECK(short_t.samples.size() == 11);
    }
}

TEST_CASE("invalid initial states are rejected") {
    IntegratorConfig cfg;
    GeodesicState s;
    s.point = ChartPoint{"bernoulli-classical", {0.5}};
    s.velocity = TangentVector{"bernoulli-classical", {0.1, 0.2}};
    CHECK_THROWS_AS(integrate(ModelId::bernoulli_classical, s, cfg), InvalidInitialState);

    s.velocity = TangentVector{"qubit-quantum", {0.1}};
    CHECK_THROWS_AS(integrate(ModelId::bernoulli_classical, s, cfg), InvalidInitialState);

    s.point.coords[0] = 1.0 - 1e-9;  // inside the domain but within the stop margin
    s.velocity = TangentVector{"bernoulli-classical", {0.1}};
    CHECK_THROWS_AS(integrate(ModelId::bernoulli_classical, s, cfg), InvalidInitialState);

    s.point.coords[0] = 0.5;
    s.velocity.components[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(integrate(ModelId::bernoulli_classical, s, cfg), InvalidInitialState);

    cfg.step_size = -1.0;
    CHECK_THROWS_AS(integrate(ModelId::bernoulli_classical,
                              make_state(ModelId::bernoulli_classical, {0.5}, {0.1}), cfg),
                    InvalidArgument);
}
