#include "stringstab/freqdomain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "stringstab/errors.hpp"

namespace stringstab {

namespace {

constexpr double kPoleGuard = 1e-300;

std::complex<double> shaping_eval(const ProtocolConfig& cfg, std::complex<double> s) {
    std::complex<double> acc{0.0, 0.0};
    for (int k = cfg.order() - 1; k >= 0; --k) {
        acc = acc * s + cfg.gain(k);
    }
    return acc;
}

std::complex<double> power(std::complex<double> s, int m) {
    std::complex<double> acc{1.0, 0.0};
    for (int k = 0; k < m; ++k) acc *= s;
    return acc;
}

std::complex<double> stage_denominator(const ProtocolConfig& cfg, int degree,
                                       std::complex<double> s) {
    const std::complex<double> den =
        power(s, cfg.order()) + cfg.coupling() * static_cast<double>(degree) * shaping_eval(cfg, s);
    if (std::abs(den) <= kPoleGuard) {
        throw PoleProximityError("transfer evaluated at a pole (|denominator| = " +
                                     std::to_string(std::abs(den)) + ")",
                                 std::abs(den));
    }
    return den;
}

void require_richness(int richness) {
    if (richness < 1) throw std::invalid_argument("richness must be >= 1");
}

/// Denominator polynomial s^m + a*r*Q_m(s) in ascending coefficients.
RealPolynomial denominator_polynomial(const ProtocolConfig& cfg, int richness) {
    std::vector<double> coeffs(static_cast<std::size_t>(cfg.order()) + 1, 0.0);
    for (int k = 0; k < cfg.order(); ++k) {
        coeffs[static_cast<std::size_t>(k)] = cfg.coupling() * richness * cfg.gain(k);
    }
    coeffs.back() += 1.0;
    return RealPolynomial(std::move(coeffs));
}

}  // namespace

FrequencyGrid::FrequencyGrid(std::vector<double> omegas, GridSpacing spacing)
    : omegas_(std::move(omegas)), spacing_(spacing) {
    if (omegas_.empty()) throw std::invalid_argument("FrequencyGrid: empty grid");
    double prev = -1.0;
    for (double w : omegas_) {
        if (!std::isfinite(w)) throw std::invalid_argument("FrequencyGrid: non-finite frequency");
        if (w < 0.0) throw std::invalid_argument("FrequencyGrid: negative frequency");
        if (w <= prev) throw std::invalid_argument("FrequencyGrid: frequencies must be strictly increasing");
        prev = w;
    }
    includes_zero_ = omegas_.front() == 0.0;
}

FrequencyGrid FrequencyGrid::log_spaced(double omega_min, double omega_max, int points,
                                        bool include_zero) {
    if (!(omega_min > 0.0) || !(omega_max > omega_min)) {
        throw std::invalid_argument("FrequencyGrid: need 0 < omega_min < omega_max");
    }
    if (points < 2) throw std::invalid_argument("FrequencyGrid: need at least 2 points");
    std::vector<double> omegas;
    omegas.reserve(static_cast<std::size_t>(points) + (include_zero ? 1 : 0));
    if (include_zero) omegas.push_back(0.0);
    const double log_min = std::log10(omega_min);
    const double log_max = std::log10(omega_max);
    for (int k = 0; k < points; ++k) {
        const double frac = static_cast<double>(k) / (points - 1);
        omegas.push_back(std::pow(10.0, log_min + frac * (log_max - log_min)));
    }
    return FrequencyGrid(std::move(omegas), GridSpacing::Log);
}

FrequencyGrid FrequencyGrid::linear(double omega_min, double omega_max, int points) {
    if (!(omega_min >= 0.0) || !(omega_max > omega_min)) {
        throw std::invalid_argument("FrequencyGrid: need 0 <= omega_min < omega_max");
    }
    if (points < 2) throw std::invalid_argument("FrequencyGrid: need at least 2 points");
    std::vector<double> omegas(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        omegas[static_cast<std::size_t>(k)] =
            omega_min + (omega_max - omega_min) * k / (points - 1);
    }
    return FrequencyGrid(std::move(omegas), GridSpacing::Linear);
}

std::complex<double> disturbance_transfer(const ProtocolConfig& cfg, int richness,
                                          std::complex<double> s) {
    require_richness(richness);
    return 1.0 / stage_denominator(cfg, richness, s);
}

std::complex<double> propagation_coefficient(const ProtocolConfig& cfg, int richness,
                                             std::complex<double> s) {
    require_richness(richness);
    return cfg.coupling() * shaping_eval(cfg, s) / stage_denominator(cfg, richness, s);
}

double dc_gain(const ProtocolConfig& cfg, int richness) {
    return std::abs(propagation_coefficient(cfg, richness, {0.0, 0.0}));
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Attenuating: return "attenuating";
        case Verdict::Marginal: return "marginal";
        case Verdict::Amplifying: return "amplifying";
    }
    return "marginal";
}

FrequencyResponse sweep(const ProtocolConfig& cfg, int richness, const FrequencyGrid& grid,
                        TransferSelect which) {
    require_richness(richness);
    FrequencyResponse response{grid, {}, {}, which == TransferSelect::Propagation ? "phi" : "g"};
    response.values.reserve(grid.size());
    response.magnitudes.reserve(grid.size());
    for (double omega : grid.omegas()) {
        const std::complex<double> s{0.0, omega};
        std::complex<double> value;
        try {
            value = which == TransferSelect::Propagation ? propagation_coefficient(cfg, richness, s)
                                                         : disturbance_transfer(cfg, richness, s);
        } catch (const PoleProximityError& e) {
            throw PoleProximityError("sweep: pole at omega = " + std::to_string(omega) + ": " +
                                         e.what(),
                                     e.denominator_magnitude());
        }
        response.values.push_back(value);
        response.magnitudes.push_back(std::abs(value));
    }
    return response;
}

StringStabilityReport hinf_estimate(const ProtocolConfig& cfg, int richness,
                                    const SweepParams& params) {
    require_richness(richness);
    if (routh_hurwitz_stable(denominator_polynomial(cfg, richness)) != RouthVerdict::Stable) {
        throw std::domain_error(
            "hinf_estimate: configuration is not internally stable; the H-infinity norm is "
            "undefined");
    }

    const FrequencyGrid grid =
        FrequencyGrid::log_spaced(params.omega_min, params.omega_max, params.points, true);
    const auto& omegas = grid.omegas();
    std::vector<double> mags(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        mags[k] = std::abs(propagation_coefficient(cfg, richness, {0.0, omegas[k]}));
    }

    double best_mag = mags[0];
    double best_omega = omegas[0];
    auto consider = [&](double omega, double mag) {
        if (mag > best_mag) {
            best_mag = mag;
            best_omega = omega;
        }
    };
    for (std::size_t k = 1; k < mags.size(); ++k) consider(omegas[k], mags[k]);

    // Discrete local maxima, best three refined. Multi-peak transfers are
    // rare here but cheap to cover.
    std::vector<std::size_t> candidates;
    for (std::size_t k = 0; k < mags.size(); ++k) {
        const bool left_ok = k == 0 || mags[k] >= mags[k - 1];
        const bool right_ok = k + 1 == mags.size() || mags[k] >= mags[k + 1];
        if (left_ok && right_ok) candidates.push_back(k);
    }
    std::sort(candidates.begin(), candidates.end(),
              [&](std::size_t a, std::size_t b) { return mags[a] > mags[b]; });
    if (candidates.size() > 3) candidates.resize(3);

    auto magnitude_at = [&](double omega) {
        return std::abs(propagation_coefficient(cfg, richness, {0.0, omega}));
    };
    constexpr double kGolden = 0.6180339887498949;
    for (std::size_t k : candidates) {
        double lo = omegas[k == 0 ? 0 : k - 1];
        double hi = omegas[k + 1 >= omegas.size() ? omegas.size() - 1 : k + 1];
        if (hi <= lo) continue;
        double c = hi - kGolden * (hi - lo);
        double d = lo + kGolden * (hi - lo);
        double fc = magnitude_at(c);
        double fd = magnitude_at(d);
        consider(c, fc);
        consider(d, fd);
        for (int iter = 0; iter < 200 && hi - lo > 1e-9 * std::max(1.0, hi); ++iter) {
            if (fc > fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - kGolden * (hi - lo);
                fc = magnitude_at(c);
                consider(c, fc);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + kGolden * (hi - lo);
                fd = magnitude_at(d);
                consider(d, fd);
            }
        }
    }

    StringStabilityReport report;
    report.dc_gain = dc_gain(cfg, richness);
    report.hinf = best_mag;
    report.omega_peak = best_omega;
    report.tolerance = params.tolerance;
    if (report.hinf < 1.0 - params.tolerance) {
        report.verdict = Verdict::Attenuating;
    } else if (report.hinf > 1.0 + params.tolerance) {
        report.verdict = Verdict::Amplifying;
    } else {
        report.verdict = Verdict::Marginal;
    }
    return report;
}

FrequencyResponse follower_chain_response(const ProtocolConfig& cfg, const Topology& t,
                                          int follower, const FrequencyGrid& grid) {
    if (follower < 1 || follower > t.n()) {
        throw std::invalid_argument("follower_chain_response: follower index out of range");
    }
    const int r = t.richness();
    const auto& degrees = t.degrees();

    FrequencyResponse response{grid, {}, {}, "follower_" + std::to_string(follower)};
    response.values.reserve(grid.size());
    response.magnitudes.reserve(grid.size());

    std::vector<std::complex<double>> chain(static_cast<std::size_t>(follower) + 1);
    for (double omega : grid.omegas()) {
        const std::complex<double> s{0.0, omega};
        const std::complex<double> q = cfg.coupling() * shaping_eval(cfg, s);
        for (int i = 1; i <= follower; ++i) {
            const std::complex<double> den = stage_denominator(cfg, degrees[static_cast<std::size_t>(i - 1)], s);
            std::complex<double> upstream{0.0, 0.0};
            for (int j = 1; j <= r && i - j >= 1; ++j) {
                upstream += chain[static_cast<std::size_t>(i - j)];
            }
            chain[static_cast<std::size_t>(i)] = (1.0 + q * upstream) / den;
        }
        response.values.push_back(chain[static_cast<std::size_t>(follower)]);
        response.magnitudes.push_back(std::abs(response.values.back()));
    }
    return response;
}

}  // namespace stringstab
