#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "stringstab/errors.hpp"
#include "stringstab/timedomain.hpp"

using namespace stringstab;

namespace {

const std::vector<double> kReferenceGains{0.2, 1.5, 1.0};

ProtocolConfig reference_protocol(int order) {
    return {order, std::vector<double>(kReferenceGains.begin(), kReferenceGains.begin() + order), 1.0};
}

Topology padded(int n, int r) {
    return Topology::r_predecessor(n, r, BoundaryConvention::LeaderPadded);
}

}  // namespace

TEST_CASE("impulse initial state puts the jump in the top derivative") {
    CHECK(impulse_initial_state(2, 1) == std::vector<double>{1.0, 1.0});
    CHECK(impulse_initial_state(3, 2) == std::vector<double>{0, 0, 0, 1, 1, 1});
    CHECK(impulse_initial_state(1, 3) == std::vector<double>{0, 0, 1});
    CHECK_THROWS_AS(impulse_initial_state(0, 1), std::invalid_argument);
}

TEST_CASE("disturbance profile validation and forcing") {
    CHECK(DisturbanceProfile::impulse().forcing(1.0) == 0.0);
    CHECK(DisturbanceProfile::step(2.0).forcing(5.0) == 2.0);

    const auto pulse = DisturbanceProfile::smooth_pulse(1.0, 1.0, 3.0, 0.5);
    CHECK(pulse.forcing(0.0) == 0.0);
    CHECK(pulse.forcing(2.0) == doctest::Approx(1.0));
    CHECK(pulse.forcing(10.0) == doctest::Approx(0.0));

    CHECK_THROWS_AS(DisturbanceProfile::smooth_pulse(1.0, 3.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(DisturbanceProfile::smooth_pulse(1.0, 1.0, 3.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(DisturbanceProfile::smooth_pulse(1.0, -1.0, 3.0, 0.5), std::invalid_argument);
}

TEST_CASE("simulate argument guards") {
    const auto topo = padded(1, 1);
    const auto cfg = reference_protocol(1);
    CHECK_THROWS_AS(simulate(topo, cfg, DisturbanceProfile::impulse(), 0.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate(topo, cfg, DisturbanceProfile::impulse(), 0.5, 1.0),
                    std::invalid_argument);
}

TEST_CASE("scalar impulse response matches the exponential") {
    const auto trace =
        simulate(padded(1, 1), reference_protocol(1), DisturbanceProfile::impulse(), 1e-3, 30.0);
    const auto& eps = trace.error_series(1, 0);
    REQUIRE(eps.size() == trace.times.size());
    for (std::size_t k = 0; k < trace.times.size(); k += 500) {
        CHECK(eps[k] == doctest::Approx(std::exp(-0.2 * trace.times[k])).epsilon(1e-6));
    }
    const std::size_t at5 = 5000;
    CHECK(trace.times[at5] == doctest::Approx(5.0));
    CHECK(eps[at5] == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("scalar step response matches the first-order closed form") {
    const auto trace =
        simulate(padded(1, 1), reference_protocol(1), DisturbanceProfile::step(0.4), 1e-3, 40.0);
    const auto& eps = trace.error_series(1, 0);
    for (std::size_t k = 0; k < trace.times.size(); k += 2500) {
        const double expected = 0.4 / 0.2 * (1.0 - std::exp(-0.2 * trace.times[k]));
        CHECK(eps[k] == doctest::Approx(expected).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("integration error falls by about sixteen when dt halves") {
    auto final_value = [&](double dt) {
        const auto trace =
            simulate(padded(1, 1), reference_protocol(1), DisturbanceProfile::impulse(), dt, 5.0);
        return trace.error_series(1, 0).back();
    };
    const double reference = final_value(0.2 / 8.0);
    const double coarse = std::abs(final_value(0.2) - reference);
    const double fine = std::abs(final_value(0.1) - reference);
    REQUIRE(fine > 0.0);
    const double order_ratio = coarse / fine;
    CHECK(order_ratio > 10.0);
    CHECK(order_ratio < 24.0);
}

TEST_CASE("single-predecessor first-order ratios match the closed form") {
    // peaks of |e_i| are (i-1)^(i-1) e^-(i-1) / (i-1)!, so the downstream
    // ratio is exp(-1) (1 + 1/(i-2))^(i-2)
    const auto trace =
        simulate(padded(20, 1), reference_protocol(1), DisturbanceProfile::impulse(), 1e-3, 100.0,
                 {.allow_unstable = false, .record_stride = 10});
    const auto metrics = propagation_metrics(trace);
    REQUIRE(metrics.ratios.size() == 19);
    CHECK(metrics.peaks[0] == doctest::Approx(1.0));
    for (int i = 3; i <= 20; ++i) {
        const double expected = std::exp(-1.0) * std::pow(1.0 + 1.0 / (i - 2), i - 2);
        REQUIRE(metrics.ratios[static_cast<std::size_t>(i - 2)].has_value());
        CHECK(*metrics.ratios[static_cast<std::size_t>(i - 2)] ==
              doctest::Approx(expected).epsilon(1e-5));
    }
}

TEST_CASE("second-order two-predecessor metrics match the reference integrator") {
    // reference: adaptive high-order integration sampled on the same grid
    const auto trace =
        simulate(padded(20, 2), reference_protocol(2), DisturbanceProfile::impulse(), 1e-3, 100.0);
    const auto metrics = propagation_metrics(trace);
    CHECK(metrics.peaks[0] == doctest::Approx(0.29938250).epsilon(1e-4));
    CHECK(metrics.peaks[19] == doctest::Approx(0.24826200).epsilon(1e-3));
    REQUIRE(metrics.ratios[1].has_value());
    CHECK(*metrics.ratios[1] == doctest::Approx(1.4934340).epsilon(1e-3));
    CHECK(metrics.peaks[19] / metrics.peaks[2] == doctest::Approx(1.108100).epsilon(1e-3));
}

TEST_CASE("third-order three-predecessor peaks dip then grow downstream") {
    const auto trace =
        simulate(padded(20, 3), reference_protocol(3), DisturbanceProfile::impulse(), 1e-3, 100.0);
    const auto metrics = propagation_metrics(trace);
    CHECK(metrics.peaks[4] < metrics.peaks[3]);
    for (std::size_t i = 4; i + 1 < metrics.peaks.size(); ++i) {
        CHECK(metrics.peaks[i + 1] > metrics.peaks[i]);
    }
    CHECK(metrics.peaks[19] == doctest::Approx(0.37697502).epsilon(1e-3));
}

TEST_CASE("impulse scaling is exactly linear") {
    const auto unit =
        simulate(padded(6, 2), reference_protocol(2), DisturbanceProfile::impulse(), 1e-2, 20.0);
    const auto scaled =
        simulate(padded(6, 2), reference_protocol(2), DisturbanceProfile::impulse(2.5), 1e-2, 20.0);
    for (int i = 1; i <= 6; ++i) {
        const auto& a = unit.spacing_series(i);
        const auto& b = scaled.spacing_series(i);
        for (std::size_t k = 0; k < a.size(); k += 37) {
            CHECK(b[k] == doctest::Approx(2.5 * a[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("identical runs are bit-identical") {
    const auto a =
        simulate(padded(4, 2), reference_protocol(2), DisturbanceProfile::impulse(), 1e-2, 10.0);
    const auto b =
        simulate(padded(4, 2), reference_protocol(2), DisturbanceProfile::impulse(), 1e-2, 10.0);
    CHECK(a.times == b.times);
    CHECK(a.states == b.states);
    CHECK(a.spacing == b.spacing);
    CHECK(a.peaks == b.peaks);
}

TEST_CASE("spacing errors telescope") {
    const auto trace =
        simulate(padded(2, 1), reference_protocol(1), DisturbanceProfile::impulse(), 1e-2, 5.0);
    const auto recomputed = spacing_errors(trace);
    CHECK(recomputed == trace.spacing);
    // identical errors cancel except at the leader interface
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        const double eps1 = trace.error_series(1, 0)[k];
        const double eps2 = trace.error_series(2, 0)[k];
        CHECK(trace.spacing_series(1)[k] == doctest::Approx(-eps1));
        CHECK(trace.spacing_series(2)[k] == doctest::Approx(eps1 - eps2));
    }
}

TEST_CASE("metrics of an all-zero run are absent, not zero divisions") {
    const auto trace =
        simulate(padded(3, 1), reference_protocol(1), DisturbanceProfile::step(0.0), 1e-2, 5.0);
    const auto metrics = propagation_metrics(trace);
    for (double peak : metrics.peaks) CHECK(peak == 0.0);
    for (const auto& ratio : metrics.ratios) CHECK_FALSE(ratio.has_value());
    for (const auto& settle : metrics.settling) CHECK_FALSE(settle.has_value());
}

TEST_CASE("scalar impulse peak and settling") {
    const auto trace =
        simulate(padded(1, 1), reference_protocol(1), DisturbanceProfile::impulse(), 1e-3, 40.0);
    const auto metrics = propagation_metrics(trace);
    CHECK(metrics.peaks[0] == doctest::Approx(1.0));
    REQUIRE(metrics.settling[0].has_value());
    // |e_1| = e^{-0.2 t} crosses 0.01 at t = 5 ln(100)
    CHECK(*metrics.settling[0] == doctest::Approx(5.0 * std::log(100.0)).epsilon(1e-3));
}

TEST_CASE("unstable configurations are refused unless forced, then abort on divergence") {
    const auto topo = padded(4, 1);
    const ProtocolConfig wild(3, {5.0, 0.1, 0.1}, 1.0);
    CHECK_THROWS_AS(simulate(topo, wild, DisturbanceProfile::impulse(), 1e-3, 10.0),
                    std::domain_error);
    try {
        simulate(topo, wild, DisturbanceProfile::impulse(), 1e-3, 60.0,
                 {.allow_unstable = true, .record_stride = 100});
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.time() > 1.0);
        CHECK(e.time() < 60.0);
    }
}

TEST_CASE("matching internal decay for a stable cell") {
    const auto trace =
        simulate(padded(20, 2), reference_protocol(1), DisturbanceProfile::impulse(), 1e-3, 200.0,
                 {.allow_unstable = false, .record_stride = 1000});
    double worst = 0.0;
    for (int i = 1; i <= 20; ++i) {
        worst = std::max(worst, std::abs(trace.error_series(i, 0).back()));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("downstream decay and dc gain tell one story for first order") {
    // r = 1: unit dc gain and non-decaying peaks; r = 2: dc gain 1/2 and
    // decaying peaks from follower 5 on
    const auto r1 =
        simulate(padded(20, 1), reference_protocol(1), DisturbanceProfile::impulse(), 1e-3, 100.0,
                 {.allow_unstable = false, .record_stride = 10});
    const auto m1 = propagation_metrics(r1);
    for (int i = 12; i <= 20; ++i) {
        CHECK(*m1.ratios[static_cast<std::size_t>(i - 2)] > 0.95);
    }

    const auto r2 =
        simulate(padded(20, 2), reference_protocol(1), DisturbanceProfile::impulse(), 1e-3, 100.0,
                 {.allow_unstable = false, .record_stride = 10});
    const auto m2 = propagation_metrics(r2);
    for (int i = 5; i <= 20; ++i) {
        CHECK(*m2.ratios[static_cast<std::size_t>(i - 2)] < 1.0);
    }
    CHECK(m2.peaks[19] / m2.peaks[3] < 0.5);
}
