#pragma once

#include <complex>
#include <string>
#include <vector>

#include "stringstab/protocol.hpp"
#include "stringstab/topology.hpp"

namespace stringstab {

enum class GridSpacing { Log, Linear };

/// Strictly increasing grid of nonnegative frequencies (rad/s).
class FrequencyGrid {
public:
    /// Logarithmically spaced grid over [omega_min, omega_max]. When
    /// include_zero is set, omega = 0 is prepended so the structural
    /// zero-frequency limit is never missed by log spacing.
    static FrequencyGrid log_spaced(double omega_min, double omega_max, int points,
                                    bool include_zero = true);

    static FrequencyGrid linear(double omega_min, double omega_max, int points);

    /// Validates: nonempty, strictly increasing, nonnegative, finite.
    FrequencyGrid(std::vector<double> omegas, GridSpacing spacing);

    [[nodiscard]] const std::vector<double>& omegas() const noexcept { return omegas_; }
    [[nodiscard]] GridSpacing spacing() const noexcept { return spacing_; }
    [[nodiscard]] bool includes_zero() const noexcept { return includes_zero_; }
    [[nodiscard]] std::size_t size() const noexcept { return omegas_.size(); }

private:
    std::vector<double> omegas_;
    GridSpacing spacing_;
    bool includes_zero_;
};

/// One transfer evaluated over a frequency grid.
struct FrequencyResponse {
    FrequencyGrid grid;
    std::vector<std::complex<double>> values;
    std::vector<double> magnitudes;
    std::string label;
};

/// Disturbance-to-error stage transfer 1 / (s^m + a*r*Q_m(s)).
/// Throws PoleProximityError when |denominator| <= 1e-300.
std::complex<double> disturbance_transfer(const ProtocolConfig& cfg, int richness,
                                          std::complex<double> s);

/// Stage-to-stage propagation coefficient a*Q_m(s) / (s^m + a*r*Q_m(s)).
/// Same pole guard as disturbance_transfer.
std::complex<double> propagation_coefficient(const ProtocolConfig& cfg, int richness,
                                             std::complex<double> s);

/// |propagation_coefficient| at zero frequency; structurally equal to 1/r
/// for every order and every positive gain choice.
double dc_gain(const ProtocolConfig& cfg, int richness);

enum class TransferSelect { Disturbance, Propagation };

/// Pointwise evaluation of the selected transfer at s = j*omega over the
/// grid. Deterministic, no smoothing. Pole errors are reported with the
/// offending frequency.
FrequencyResponse sweep(const ProtocolConfig& cfg, int richness, const FrequencyGrid& grid,
                        TransferSelect which);

enum class Verdict { Attenuating, Marginal, Amplifying };

[[nodiscard]] const char* to_string(Verdict v);

struct SweepParams {
    double omega_min = 1e-3;
    double omega_max = 1e3;
    int points = 2000;
    double tolerance = 1e-6;  ///< classification tolerance around gain 1
};

struct StringStabilityReport {
    double dc_gain = 0.0;
    double hinf = 0.0;
    double omega_peak = 0.0;
    Verdict verdict = Verdict::Marginal;
    double tolerance = 1e-6;
};

/// Estimates sup_w |propagation_coefficient(j w)| by a dense log sweep
/// (omega = 0 always included) followed by golden-section refinement of the
/// top three discrete local maxima until the bracketing interval shrinks
/// below 1e-9 relative. Verdict: Attenuating if hinf < 1 - tol, Marginal if
/// |hinf - 1| <= tol, Amplifying if hinf > 1 + tol.
///
/// Refuses (std::domain_error) configurations whose denominator polynomial
/// s^m + a*r*Q_m(s) is not Routh stable: the norm is undefined there.
StringStabilityReport hinf_estimate(const ProtocolConfig& cfg, int richness,
                                    const SweepParams& params = {});

/// Leader-disturbance-to-error transfer T_i = E_i/W of follower i (1-based),
/// computed by the stage recursion T_i = G + Phi * sum_{j=1..r} T_{i-j} with
/// T_k = 0 for k <= 0 (leader and padded predecessors carry zero error).
/// Under the Truncated convention the per-row degree replaces r inside the
/// stage transfers for boundary rows. Internal stability is the caller's
/// responsibility; pole errors propagate.
FrequencyResponse follower_chain_response(const ProtocolConfig& cfg, const Topology& t,
                                          int follower, const FrequencyGrid& grid);

}  // namespace stringstab
