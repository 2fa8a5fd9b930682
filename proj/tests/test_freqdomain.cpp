#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "stringstab/errors.hpp"
#include "stringstab/freqdomain.hpp"

using namespace stringstab;
using complexd = std::complex<double>;

namespace {

const std::vector<double> kReferenceGains{0.2, 1.5, 1.0};

ProtocolConfig reference_protocol(int order) {
    return {order, std::vector<double>(kReferenceGains.begin(), kReferenceGains.begin() + order), 1.0};
}

/// Direct route for the whole-chain transfer: solve the lower-triangular
/// complex system (s^m I + a Q(s) L) E = 1 by forward substitution.
std::vector<complexd> direct_chain_solve(const ProtocolConfig& cfg, const Topology& t,
                                         complexd s) {
    complexd q{0.0, 0.0};
    for (int k = cfg.order() - 1; k >= 0; --k) q = q * s + cfg.gain(k);
    q *= cfg.coupling();
    complexd s_pow{1.0, 0.0};
    for (int k = 0; k < cfg.order(); ++k) s_pow *= s;

    const int n = t.n();
    std::vector<complexd> solution(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        complexd rhs{1.0, 0.0};
        for (int j = 0; j < i; ++j) {
            rhs -= q * t.laplacian(i, j) * solution[static_cast<std::size_t>(j)];
        }
        solution[static_cast<std::size_t>(i)] = rhs / (s_pow + q * t.laplacian(i, i));
    }
    return solution;
}

}  // namespace

TEST_CASE("frequency grid validation") {
    CHECK_THROWS_AS(FrequencyGrid({}, GridSpacing::Linear), std::invalid_argument);
    CHECK_THROWS_AS(FrequencyGrid({1.0, 1.0}, GridSpacing::Linear), std::invalid_argument);
    CHECK_THROWS_AS(FrequencyGrid({-1.0, 1.0}, GridSpacing::Linear), std::invalid_argument);

    const auto grid = FrequencyGrid::log_spaced(1e-3, 1e3, 100, true);
    CHECK(grid.includes_zero());
    CHECK(grid.size() == 101);
    CHECK(grid.omegas().front() == 0.0);
    CHECK(grid.omegas()[1] == doctest::Approx(1e-3));
    CHECK(grid.omegas().back() == doctest::Approx(1e3));

    const auto no_zero = FrequencyGrid::log_spaced(1e-2, 1.0, 10, false);
    CHECK_FALSE(no_zero.includes_zero());
}

TEST_CASE("disturbance transfer point values") {
    CHECK(disturbance_transfer(reference_protocol(2), 2, {0.0, 0.0}).real() == doctest::Approx(2.5));

    const complexd value = disturbance_transfer(reference_protocol(1), 1, {0.0, 0.2});
    CHECK(value.real() == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(value.imag() == doctest::Approx(-2.5).epsilon(1e-12));

    // s + a r gamma0 = 0 exactly
    CHECK_THROWS_AS(disturbance_transfer(reference_protocol(1), 2, {-0.4, 0.0}), PoleProximityError);
}

TEST_CASE("propagation coefficient zero-frequency values") {
    for (int m : {1, 2, 3}) {
        CHECK(std::abs(propagation_coefficient(reference_protocol(m), 2, {0.0, 0.0})) ==
              doctest::Approx(0.5).epsilon(1e-14));
        CHECK(std::abs(propagation_coefficient(reference_protocol(m), 3, {0.0, 0.0})) ==
              doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    }
    // first-order magnitude at omega = 0.4 with r = 2: 0.2/sqrt(0.32)
    CHECK(std::abs(propagation_coefficient(reference_protocol(1), 2, {0.0, 0.4})) ==
          doctest::Approx(0.35355339059327373).epsilon(1e-12));
}

TEST_CASE("dc gain follows the reciprocal-richness law") {
    CHECK(dc_gain(reference_protocol(1), 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dc_gain(reference_protocol(2), 2) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(dc_gain(reference_protocol(3), 4) == doctest::Approx(0.25).epsilon(1e-14));

    std::mt19937 rng(31);
    std::uniform_real_distribution<double> gain(0.01, 10.0);
    std::uniform_real_distribution<double> coupling(0.1, 10.0);
    for (int m = 1; m <= 5; ++m) {
        for (int r = 1; r <= 6; ++r) {
            for (int draw = 0; draw < 10; ++draw) {
                std::vector<double> gains(static_cast<std::size_t>(m));
                for (auto& g : gains) g = gain(rng);
                const ProtocolConfig cfg(m, gains, coupling(rng));
                CHECK(std::abs(dc_gain(cfg, r) - 1.0 / r) <= 1e-12);
            }
        }
    }
}

TEST_CASE("sweep evaluates the selected transfer pointwise") {
    const FrequencyGrid zero_only({0.0, 1.0}, GridSpacing::Linear);
    const auto phi = sweep(reference_protocol(1), 2, FrequencyGrid({0.0}, GridSpacing::Linear),
                           TransferSelect::Propagation);
    REQUIRE(phi.magnitudes.size() == 1);
    CHECK(phi.magnitudes[0] == doctest::Approx(0.5));

    const auto phi2 = sweep(reference_protocol(1), 2, FrequencyGrid({0.0, 0.4}, GridSpacing::Linear),
                            TransferSelect::Propagation);
    REQUIRE(phi2.magnitudes.size() == 2);
    CHECK(phi2.magnitudes[0] == doctest::Approx(0.5));
    CHECK(phi2.magnitudes[1] == doctest::Approx(0.35355339059327373));

    const auto g = sweep(reference_protocol(2), 2, FrequencyGrid({0.0}, GridSpacing::Linear),
                         TransferSelect::Disturbance);
    CHECK(g.magnitudes[0] == doctest::Approx(2.5));

    for (std::size_t k = 0; k < phi2.values.size(); ++k) {
        CHECK(phi2.magnitudes[k] == doctest::Approx(std::abs(phi2.values[k])).epsilon(1e-15));
    }
}

TEST_CASE("first-order supremum sits at zero frequency") {
    for (int r : {1, 2, 3}) {
        const auto report = hinf_estimate(reference_protocol(1), r);
        CHECK(std::abs(report.hinf - 1.0 / r) <= 1e-9);
        CHECK(report.omega_peak == 0.0);
        CHECK(report.dc_gain == doctest::Approx(1.0 / r).epsilon(1e-12));
        CHECK(report.verdict == (r == 1 ? Verdict::Marginal : Verdict::Attenuating));
    }
}

TEST_CASE("higher-order peak estimates match the high-precision reference") {
    // reference values computed by an independent 40-digit golden-section
    // search over |Phi(j omega)|
    struct Expected {
        int m;
        int r;
        double hinf;
        double omega_peak;
        Verdict verdict;
    };
    const Expected table[] = {
        {2, 1, 1.0641760594415953, 0.26154004944784113, Verdict::Amplifying},
        {2, 2, 0.51737692536791089, 0.32061967730908617, Verdict::Attenuating},
        {2, 3, 0.34136149164166248, 0.35966583697459876, Verdict::Attenuating},
        {3, 1, 1.8290110074890517, 1.0769802731739664, Verdict::Amplifying},
        {3, 2, 0.71931698354350061, 1.4060291970762181, Verdict::Attenuating},
        {3, 3, 0.43548063533008345, 1.6270109299335728, Verdict::Attenuating},
    };
    for (const auto& expected : table) {
        const auto report = hinf_estimate(reference_protocol(expected.m), expected.r);
        CHECK(report.hinf == doctest::Approx(expected.hinf).epsilon(1e-9));
        CHECK(report.omega_peak == doctest::Approx(expected.omega_peak).epsilon(1e-4));
        CHECK(report.verdict == expected.verdict);
        CHECK(report.hinf >= report.dc_gain - 1e-12);
    }
}

TEST_CASE("hinf refuses internally unstable configurations") {
    // denominator s^3 + 0.1 s^2 + 0.1 s + 5 has right-half-plane roots
    const ProtocolConfig unstable(3, {5.0, 0.1, 0.1}, 1.0);
    CHECK_THROWS_AS(hinf_estimate(unstable, 1), std::domain_error);
}

TEST_CASE("magnitude rolls off at high frequency") {
    for (int m : {1, 2, 3}) {
        for (int r : {1, 2, 3}) {
            CHECK(std::abs(propagation_coefficient(reference_protocol(m), r, {0.0, 1e4})) < 1e-2);
        }
    }
}

TEST_CASE("hinf dominates any user sweep") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> span(0.01, 50.0);
    for (int m : {1, 2, 3}) {
        for (int r : {1, 2, 3}) {
            const auto report = hinf_estimate(reference_protocol(m), r);
            const double hi = span(rng);
            const auto grid = FrequencyGrid::linear(0.0, hi, 400);
            const auto response = sweep(reference_protocol(m), r, grid, TransferSelect::Propagation);
            for (double mag : response.magnitudes) {
                CHECK(report.hinf >= mag - 1e-9);
            }
        }
    }
}

TEST_CASE("first-order magnitude decreases along increasing grids") {
    for (int r : {1, 2, 3}) {
        const auto grid = FrequencyGrid::log_spaced(1e-3, 1e3, 500, true);
        const auto response = sweep(reference_protocol(1), r, grid, TransferSelect::Propagation);
        for (std::size_t k = 1; k < response.magnitudes.size(); ++k) {
            CHECK(response.magnitudes[k] <= response.magnitudes[k - 1] + 1e-15);
        }
    }
}

TEST_CASE("chain response closed forms") {
    const auto topo = Topology::r_predecessor(5, 1, BoundaryConvention::LeaderPadded);
    const auto cfg = reference_protocol(2);
    const FrequencyGrid grid({0.0, 0.3, 1.7}, GridSpacing::Linear);

    // T_1 = G for an empty predecessor sum
    const auto first = follower_chain_response(cfg, topo, 1, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const complexd s{0.0, grid.omegas()[k]};
        CHECK(std::abs(first.values[k] - disturbance_transfer(cfg, 1, s)) < 1e-14);
    }

    // single-predecessor chain: T_i = G * sum_{k<i} Phi^k
    for (int follower : {2, 4}) {
        const auto response = follower_chain_response(cfg, topo, follower, grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const complexd s{0.0, grid.omegas()[k]};
            const complexd g = disturbance_transfer(cfg, 1, s);
            const complexd phi = propagation_coefficient(cfg, 1, s);
            complexd sum{0.0, 0.0};
            complexd power{1.0, 0.0};
            for (int j = 0; j < follower; ++j) {
                sum += power;
                power *= phi;
            }
            CHECK(std::abs(response.values[k] - g * sum) <= 1e-12 * std::abs(g * sum));
        }
    }

    // two-predecessor chain at follower 3: T_3 = G (1 + Phi(1+Phi) + Phi)
    const auto topo2 = Topology::r_predecessor(4, 2, BoundaryConvention::LeaderPadded);
    const auto third = follower_chain_response(cfg, topo2, 3, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const complexd s{0.0, grid.omegas()[k]};
        const complexd g = disturbance_transfer(cfg, 2, s);
        const complexd phi = propagation_coefficient(cfg, 2, s);
        const complexd expected = g * (1.0 + phi * (1.0 + phi) + phi);
        CHECK(std::abs(third.values[k] - expected) <= 1e-12 * std::abs(expected));
    }
}

TEST_CASE("chain recursion agrees with the direct linear solve") {
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> log_omega(-3.0, 3.0);
    for (auto convention : {BoundaryConvention::LeaderPadded, BoundaryConvention::Truncated}) {
        for (int m : {1, 2, 3}) {
            for (int r : {1, 2, 3}) {
                const auto topo = Topology::r_predecessor(10, r, convention);
                const auto cfg = reference_protocol(m);
                std::vector<double> omegas;
                for (int k = 0; k < 20; ++k) omegas.push_back(std::pow(10.0, log_omega(rng)));
                std::sort(omegas.begin(), omegas.end());
                const FrequencyGrid grid(omegas, GridSpacing::Linear);
                for (int follower = 1; follower <= 10; follower += 3) {
                    const auto response = follower_chain_response(cfg, topo, follower, grid);
                    for (std::size_t k = 0; k < grid.size(); ++k) {
                        const complexd s{0.0, grid.omegas()[k]};
                        const auto direct = direct_chain_solve(cfg, topo, s);
                        const complexd expected = direct[static_cast<std::size_t>(follower - 1)];
                        CHECK(std::abs(response.values[k] - expected) <=
                              1e-9 * std::max(1e-30, std::abs(expected)));
                    }
                }
            }
        }
    }
}

TEST_CASE("chain response rejects out-of-range followers") {
    const auto topo = Topology::r_predecessor(3, 1, BoundaryConvention::LeaderPadded);
    const FrequencyGrid grid({0.0}, GridSpacing::Linear);
    CHECK_THROWS_AS(follower_chain_response(reference_protocol(1), topo, 0, grid),
                    std::invalid_argument);
    CHECK_THROWS_AS(follower_chain_response(reference_protocol(1), topo, 4, grid),
                    std::invalid_argument);
}
