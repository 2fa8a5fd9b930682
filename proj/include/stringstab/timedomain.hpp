#pragma once

#include <optional>
#include <vector>

#include "stringstab/protocol.hpp"
#include "stringstab/topology.hpp"

namespace stringstab {

/// Disturbance applied to every follower's top-order error equation as the
/// common forcing w(t). The impulse is realized exactly as a state jump (the
/// system is linear), not as a narrow pulse.
class DisturbanceProfile {
public:
    enum class Kind { Impulse, Step, SmoothPulse };

    static DisturbanceProfile impulse(double height = 1.0);
    static DisturbanceProfile step(double height);
    /// Smooth on/off pulse with C1 ramps of the given width. Requires
    /// 0 <= t_on < t_off and ramp > 0.
    static DisturbanceProfile smooth_pulse(double height, double t_on, double t_off, double ramp);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double height() const noexcept { return height_; }
    [[nodiscard]] double t_on() const noexcept { return t_on_; }
    [[nodiscard]] double t_off() const noexcept { return t_off_; }
    [[nodiscard]] double ramp() const noexcept { return ramp_; }

    /// Forcing value w(t); zero for the impulse (handled via initial state).
    [[nodiscard]] double forcing(double t) const;

private:
    DisturbanceProfile(Kind kind, double height, double t_on, double t_off, double ramp);

    Kind kind_;
    double height_;
    double t_on_;
    double t_off_;
    double ramp_;
};

/// Recorded trajectories of one simulation run.
///
/// `states[(i-1)*order + k]` is the series of the k-th derivative of
/// follower i's tracking error on the recorded time grid. `spacing[i-1]` is
/// e_i = eps_{i-1} - eps_i with eps_0 identically zero (so e_1 = -eps_1).
/// `peaks[i-1]` is max_t |e_i| taken at full integrator resolution,
/// independent of the recording stride.
struct SimulationTrace {
    int n = 0;
    int order = 0;
    double dt = 0.0;
    double horizon = 0.0;
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> spacing;
    std::vector<double> peaks;

    [[nodiscard]] const std::vector<double>& error_series(int follower, int k) const {
        return states[static_cast<std::size_t>(follower - 1) * order + k];
    }
    [[nodiscard]] const std::vector<double>& spacing_series(int follower) const {
        return spacing[static_cast<std::size_t>(follower - 1)];
    }
};

/// State vector right after a unit impulse crosses t = 0: zero everywhere
/// except the (m-1)-th error derivative of every follower, which jumps to 1.
/// Layout matches simulate(): block k*n .. k*n+n-1 holds derivative order k.
std::vector<double> impulse_initial_state(int n, int order);

struct SimulateOptions {
    bool allow_unstable = false;  ///< warn-and-continue for instability demos
    int record_stride = 1;        ///< record every k-th step (first and last always kept)
};

/// Integrates the m*n-dimensional first-order error system with classical
/// fixed-step 4th-order Runge-Kutta. Identical inputs give bit-identical
/// traces. Requires dt > 0 and horizon >= 10*dt; refuses internally unstable
/// configurations unless allow_unstable is set. Aborts with DivergenceError
/// when any |state| exceeds 1e12.
SimulationTrace simulate(const Topology& t, const ProtocolConfig& cfg,
                         const DisturbanceProfile& disturbance, double dt, double horizon,
                         const SimulateOptions& options = {});

/// Recomputes the spacing-error matrix from the recorded states; idempotent.
std::vector<std::vector<double>> spacing_errors(const SimulationTrace& trace);

struct PropagationMetrics {
    std::vector<double> peaks;                    ///< peaks[i-1] = max_t |e_i|
    std::vector<std::optional<double>> ratios;    ///< ratios[i-2] = peaks[i]/peaks[i-1], i >= 2
    std::vector<std::optional<double>> settling;  ///< first t after which |e_i| stays below 1% of its peak
};

/// Purely descriptive propagation metrics. Ratios with a zero denominator
/// and settling times of all-zero trajectories are reported as absent, not
/// as 0/0.
PropagationMetrics propagation_metrics(const SimulationTrace& trace);

}  // namespace stringstab
