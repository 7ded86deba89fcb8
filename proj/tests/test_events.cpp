#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qdyn/events.hpp"

using namespace qdyn;
using std::numbers::pi;

namespace {

struct Series {
    std::vector<double> t;
    std::vector<double> c;
};

template <typename F>
Series sample(F f, double t_end, double dt) {
    Series s;
    const auto n = static_cast<int>(std::lround(t_end / dt));
    for (int k = 0; k <= n; ++k) {
        s.t.push_back(k * dt);
        s.c.push_back(f(k * dt));
    }
    return s;
}

}  // namespace

TEST_CASE("constant zero curve has no events") {
    const Series s = sample([](double) { return 0.0; }, 10.0, 0.01);
    const EventReport r = detect_events(s.t, s.c);
    CHECK(!r.death_time);
    CHECK(!r.birth_time);
    CHECK(r.revivals.empty());
    CHECK(r.terminal_value == 0.0);
}

TEST_CASE("damped positive cosine lobes") {
    const double dt = 0.01;
    const Series s = sample([](double t) { return std::max(0.0, std::cos(t)) * std::exp(-0.1 * t); }, 20.0, dt);
    const EventReport r = detect_events(s.t, s.c);
    REQUIRE(r.death_time);
    CHECK(std::abs(*r.death_time - pi / 2) <= dt);
    CHECK(!r.birth_time);
    // Positive lobes around 2 pi, 4 pi and 6 pi follow the first death within t <= 20.
    // The damping pulls each maximum back to 2 pi k - atan(0.1).
    const double shift = std::atan(0.1);
    REQUIRE(r.revivals.size() == 3);
    CHECK(std::abs(r.revivals[0].peak_time - (2 * pi - shift)) <= dt);
    CHECK(std::abs(r.revivals[0].start - 1.5 * pi) <= dt);
    CHECK(std::abs(r.revivals[0].end - 2.5 * pi) <= dt);
    CHECK(r.revivals[0].peak_value ==
          doctest::Approx(std::exp(-0.1 * (2 * pi - shift)) * std::cos(shift)).epsilon(1e-4));
    CHECK(std::abs(r.revivals[1].peak_time - (4 * pi - shift)) <= dt);
    CHECK(r.revivals[2].start == doctest::Approx(5.5 * pi).epsilon(1e-3));
    CHECK(r.peak_value == 1.0);
}

TEST_CASE("birth from an unentangled start") {
    const Series s = sample([](double t) { return t < 1.0 ? 0.0 : std::max(0.0, std::sin(t - 1.0)); }, 6.0, 0.01);
    const EventReport r = detect_events(s.t, s.c);
    REQUIRE(r.birth_time);
    CHECK(*r.birth_time == doctest::Approx(1.01).epsilon(1e-9));
    REQUIRE(r.death_time);
    CHECK(*r.death_time == doctest::Approx(1.0 + pi).epsilon(0.01));
}

TEST_CASE("brief dips shorter than the hold window are not deaths") {
    const Series s = sample([](double t) { return std::abs(t - 1.0) < 0.1 ? 0.0 : 0.5; }, 3.0, 0.01);
    const EventReport r = detect_events(s.t, s.c);
    CHECK(!r.death_time);
    CHECK(r.revivals.empty());
}

TEST_CASE("death near the end of the curve counts when it stays below") {
    const Series s = sample([](double t) { return t < 2.9 ? 0.5 : 0.0; }, 3.0, 0.01);
    const EventReport r = detect_events(s.t, s.c);
    REQUIRE(r.death_time);
    CHECK(*r.death_time == doctest::Approx(2.9).epsilon(1e-6));
}

TEST_CASE("terminal value is the mean of the last 5 percent") {
    std::vector<double> t(100), c(100);
    for (int i = 0; i < 100; ++i) {
        t[i] = i;
        c[i] = i >= 95 ? 2.0 : 0.0;
    }
    CHECK(detect_events(t, c).terminal_value == 2.0);
}

TEST_CASE("appending trailing zeros does not change the report") {
    const double dt = 0.01;
    Series s = sample([](double t) { return std::max(0.0, std::cos(t)) * std::exp(-0.1 * t); }, 8.0, dt);
    // Curve ends inside a zero stretch (cos < 0 for t in (3 pi/2 .. 5 pi/2)).
    s.c.back() = 0.0;
    const EventReport base = detect_events(s.t, s.c);
    Series longer = s;
    for (int k = 1; k <= 500; ++k) {
        longer.t.push_back(s.t.back() + k * dt);
        longer.c.push_back(0.0);
    }
    const EventReport ext = detect_events(longer.t, longer.c);
    CHECK(ext.death_time == base.death_time);
    CHECK(ext.birth_time == base.birth_time);
    REQUIRE(ext.revivals.size() == base.revivals.size());
    for (std::size_t i = 0; i < base.revivals.size(); ++i) {
        CHECK(ext.revivals[i].start == base.revivals[i].start);
        CHECK(ext.revivals[i].end == base.revivals[i].end);
        CHECK(ext.revivals[i].peak_value == base.revivals[i].peak_value);
    }
    CHECK(ext.peak_value == base.peak_value);
}

TEST_CASE("invalid input") {
    const std::vector<double> t{0.0, 1.0, 3.0, 4.0};
    const std::vector<double> c{1.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(detect_events(t, c), std::invalid_argument);
    const std::vector<double> shorter{1.0};
    CHECK_THROWS_AS(detect_events(t, shorter), std::invalid_argument);
    CHECK_THROWS_AS(detect_events(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
}
