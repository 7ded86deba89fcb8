#include <doctest.h>

#include <cstdlib>

#include "qdyn/sweep.hpp"

using namespace qdyn;

TEST_CASE("RunConfig validation") {
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    auto bad = [](auto mutate) {
        RunConfig c;
        mutate(c);
        CHECK_THROWS_AS(c.validate(), ConfigError);
    };
    bad([](RunConfig& c) { c.omega_over_lambda = 0.0; });
    bad([](RunConfig& c) { c.gamma_over_lambda = -0.1; });
    bad([](RunConfig& c) { c.alpha_sq = 1.5; });
    bad([](RunConfig& c) { c.alpha_sq_count = 1; });
    bad([](RunConfig& c) { c.dt_lambda = 0.0; });
    bad([](RunConfig& c) { c.t_max_lambda = 1.0; c.dt_lambda = 0.3; });
    bad([](RunConfig& c) { c.n_max = 0; });
    bad([](RunConfig& c) { c.beta_phase = 7.0; });
    bad([](RunConfig& c) { c.sample_every = 0; });
}

TEST_CASE("resonance by default, detuning on request") {
    RunConfig c;
    c.omega_over_lambda = 3.0;
    CHECK(c.model_params().detuning() == 0.0);
    CHECK(c.model_params().lambda() == 1.0);
    c.omega0_over_lambda = 3.5;
    CHECK(c.model_params().detuning() == 0.5);
}

TEST_CASE("alpha^2 grid") {
    RunConfig c;
    c.alpha_sq = 0.3;
    CHECK(c.alpha_sq_values() == std::vector<double>{0.3});
    c.alpha_sq_count = 5;
    CHECK(c.alpha_sq_values() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
}

TEST_CASE("t_max = 0 gives the initial concurrence") {
    for (Engine e : {Engine::Reduced, Engine::Oracle}) {
        RunConfig c;
        c.engine = e;
        c.t_max_lambda = 0.0;
        c.alpha_sq = 0.5;
        ConcurrenceSurface s = run(c);
        REQUIRE(s.time_values.size() == 1);
        CHECK(s.concurrence(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
        c.alpha_sq = 0.0;
        s = run(c);
        CHECK(s.concurrence(0, 0) == 0.0);
        c.alpha_sq = 1.0;
        s = run(c);
        CHECK(s.concurrence(0, 0) == 0.0);
    }
}

TEST_CASE("surface shape and diagnostics") {
    RunConfig c;
    c.alpha_sq_count = 3;
    c.t_max_lambda = 1.0;
    c.dt_lambda = 1e-3;
    c.sample_every = 100;
    const ConcurrenceSurface s = run(c);
    CHECK(s.alpha_sq_values.size() == 3);
    CHECK(s.time_values.size() == 11);
    CHECK(s.concurrence.rows() == 3);
    CHECK(s.concurrence.cols() == 11);
    CHECK(s.concurrence.minCoeff() >= 0.0);
    CHECK(s.concurrence.maxCoeff() <= 1.0);
    REQUIRE(s.diagnostics.size() == 3);
    for (const auto& d : s.diagnostics) {
        CHECK(d.general_fallbacks == 0);
        CHECK(d.max_hermiticity_defect < 1e-12);
        CHECK(!d.joint_trace_drift);
    }
}

TEST_CASE("worker count is order independent") {
    RunConfig c;
    c.alpha_sq_count = 5;
    c.omega_over_lambda = 3.0;
    c.t_max_lambda = 2.0;
    setenv("QDYN_WORKERS", "1", 1);
    CHECK(worker_count() == 1);
    const ConcurrenceSurface serial = run(c);
    setenv("QDYN_WORKERS", "3", 1);
    CHECK(worker_count() == 3);
    const ConcurrenceSurface parallel = run(c);
    unsetenv("QDYN_WORKERS");
    CHECK(serial.concurrence == parallel.concurrence);
    CHECK(serial.trace_re == parallel.trace_re);
}

TEST_CASE("phi surfaces are mirror symmetric; psi surfaces are not") {
    RunConfig c;
    c.alpha_sq_count = 11;
    c.omega_over_lambda = 3.0;
    c.t_max_lambda = 5.0;
    const double phi = mirror_asymmetry(run(c));
    CHECK(phi <= 1e-8);
    c.family = Family::Psi;
    const double psi = mirror_asymmetry(run(c));
    MESSAGE("psi-family mirror asymmetry: " << psi);
    CHECK(psi > 1e-3);
}

TEST_CASE("oracle engine reports joint conservation") {
    RunConfig c;
    c.engine = Engine::Oracle;
    c.omega_over_lambda = 10.0;
    c.n_max = 3;
    c.t_max_lambda = 1.0;
    const ConcurrenceSurface s = run(c);
    REQUIRE(s.diagnostics.front().joint_trace_drift);
    CHECK(*s.diagnostics.front().joint_trace_drift < 1e-8);
}

TEST_CASE("invalid configuration surfaces as ConfigError") {
    RunConfig c;
    c.dt_lambda = -1.0;
    CHECK_THROWS_AS(run(c), ConfigError);
}
