#include "stringstab/timedomain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stringstab/errors.hpp"

namespace stringstab {

namespace {
constexpr double kDivergenceBound = 1e12;

double smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * (3.0 - 2.0 * u);
}
}  // namespace

DisturbanceProfile::DisturbanceProfile(Kind kind, double height, double t_on, double t_off,
                                       double ramp)
    : kind_(kind), height_(height), t_on_(t_on), t_off_(t_off), ramp_(ramp) {}

DisturbanceProfile DisturbanceProfile::impulse(double height) {
    if (!std::isfinite(height)) throw std::invalid_argument("DisturbanceProfile: non-finite height");
    return {Kind::Impulse, height, 0.0, 0.0, 0.0};
}

DisturbanceProfile DisturbanceProfile::step(double height) {
    if (!std::isfinite(height)) throw std::invalid_argument("DisturbanceProfile: non-finite height");
    return {Kind::Step, height, 0.0, 0.0, 0.0};
}

DisturbanceProfile DisturbanceProfile::smooth_pulse(double height, double t_on, double t_off,
                                                    double ramp) {
    if (!std::isfinite(height)) throw std::invalid_argument("DisturbanceProfile: non-finite height");
    if (t_on < 0.0 || t_off < 0.0) {
        throw std::invalid_argument("DisturbanceProfile: pulse times must be nonnegative");
    }
    if (!(t_on < t_off)) {
        throw std::invalid_argument("DisturbanceProfile: need t_on < t_off");
    }
    if (!(ramp > 0.0)) {
        throw std::invalid_argument("DisturbanceProfile: need ramp > 0");
    }
    return {Kind::SmoothPulse, height, t_on, t_off, ramp};
}

double DisturbanceProfile::forcing(double t) const {
    switch (kind_) {
        case Kind::Impulse: return 0.0;
        case Kind::Step: return t >= 0.0 ? height_ : 0.0;
        case Kind::SmoothPulse:
            return height_ * (smoothstep((t - t_on_) / ramp_) - smoothstep((t - t_off_) / ramp_));
    }
    return 0.0;
}

std::vector<double> impulse_initial_state(int n, int order) {
    if (n < 1 || order < 1) {
        throw std::invalid_argument("impulse_initial_state: need n >= 1 and order >= 1");
    }
    std::vector<double> state(static_cast<std::size_t>(n) * order, 0.0);
    for (int i = 0; i < n; ++i) {
        state[static_cast<std::size_t>(order - 1) * n + i] = 1.0;
    }
    return state;
}

namespace {

/// d/dt of the stacked error state; block k holds derivative order k.
class ErrorDynamics {
public:
    ErrorDynamics(const Topology& t, const ProtocolConfig& cfg, const DisturbanceProfile& dist)
        : topo_(t), cfg_(cfg), dist_(dist), n_(t.n()), m_(cfg.order()) {}

    void operator()(double t, const std::vector<double>& x, std::vector<double>& dx) const {
        for (int k = 0; k + 1 < m_; ++k) {
            for (int i = 0; i < n_; ++i) {
                dx[static_cast<std::size_t>(k) * n_ + i] =
                    x[static_cast<std::size_t>(k + 1) * n_ + i];
            }
        }
        const double w = dist_.forcing(t);
        const auto& degrees = topo_.degrees();
        const int r = topo_.richness();
        for (int i = 0; i < n_; ++i) {
            double acc = 0.0;
            for (int k = 0; k < m_; ++k) {
                const double* block = x.data() + static_cast<std::size_t>(k) * n_;
                double lap = degrees[static_cast<std::size_t>(i)] * block[i];
                for (int j = 1; j <= r && i - j >= 0; ++j) {
                    lap -= block[i - j];
                }
                acc += cfg_.gain(k) * lap;
            }
            dx[static_cast<std::size_t>(m_ - 1) * n_ + i] = -cfg_.coupling() * acc + w;
        }
    }

private:
    const Topology& topo_;
    const ProtocolConfig& cfg_;
    const DisturbanceProfile& dist_;
    int n_;
    int m_;
};

}  // namespace

SimulationTrace simulate(const Topology& t, const ProtocolConfig& cfg,
                         const DisturbanceProfile& disturbance, double dt, double horizon,
                         const SimulateOptions& options) {
    if (!(dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
    if (!(horizon >= 10.0 * dt)) {
        throw std::invalid_argument("simulate: horizon must be at least 10*dt");
    }
    if (options.record_stride < 1) {
        throw std::invalid_argument("simulate: record_stride must be >= 1");
    }
    if (!options.allow_unstable && !internal_stability_check(t, cfg).overall) {
        throw std::domain_error(
            "simulate: configuration is internally unstable (pass allow_unstable to integrate "
            "anyway)");
    }

    const int n = t.n();
    const int m = cfg.order();
    const std::size_t dim = static_cast<std::size_t>(n) * m;
    const long long steps = std::llround(horizon / dt);

    std::vector<double> state(dim, 0.0);
    if (disturbance.kind() == DisturbanceProfile::Kind::Impulse) {
        state = impulse_initial_state(n, m);
        for (double& v : state) v *= disturbance.height();
    }

    SimulationTrace trace;
    trace.n = n;
    trace.order = m;
    trace.dt = dt;
    trace.horizon = horizon;
    trace.states.resize(dim);
    trace.spacing.resize(static_cast<std::size_t>(n));
    trace.peaks.assign(static_cast<std::size_t>(n), 0.0);

    const std::size_t recorded = static_cast<std::size_t>(steps / options.record_stride) + 2;
    trace.times.reserve(recorded);
    for (auto& series : trace.states) series.reserve(recorded);
    for (auto& series : trace.spacing) series.reserve(recorded);

    auto spacing_at = [&](int follower) {
        // e_i = eps_{i-1} - eps_i with eps_0 = 0; order-0 block leads.
        const double prev = follower >= 2 ? state[static_cast<std::size_t>(follower - 2)] : 0.0;
        return prev - state[static_cast<std::size_t>(follower - 1)];
    };
    auto update_peaks = [&]() {
        for (int i = 1; i <= n; ++i) {
            const double mag = std::abs(spacing_at(i));
            if (mag > trace.peaks[static_cast<std::size_t>(i - 1)]) {
                trace.peaks[static_cast<std::size_t>(i - 1)] = mag;
            }
        }
    };
    auto record = [&](double time) {
        trace.times.push_back(time);
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < m; ++k) {
                trace.states[static_cast<std::size_t>(i) * m + k].push_back(
                    state[static_cast<std::size_t>(k) * n + i]);
            }
            trace.spacing[static_cast<std::size_t>(i)].push_back(spacing_at(i + 1));
        }
    };

    update_peaks();
    record(0.0);

    const ErrorDynamics dynamics(t, cfg, disturbance);
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), scratch(dim);
    const double half = dt / 2.0;

    for (long long step = 1; step <= steps; ++step) {
        const double t0 = static_cast<double>(step - 1) * dt;

        dynamics(t0, state, k1);
        for (std::size_t j = 0; j < dim; ++j) scratch[j] = state[j] + half * k1[j];
        dynamics(t0 + half, scratch, k2);
        for (std::size_t j = 0; j < dim; ++j) scratch[j] = state[j] + half * k2[j];
        dynamics(t0 + half, scratch, k3);
        for (std::size_t j = 0; j < dim; ++j) scratch[j] = state[j] + dt * k3[j];
        dynamics(t0 + dt, scratch, k4);
        for (std::size_t j = 0; j < dim; ++j) {
            state[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }

        const double time = static_cast<double>(step) * dt;
        for (double v : state) {
            if (!std::isfinite(v) || std::abs(v) > kDivergenceBound) {
                throw DivergenceError("simulate: state diverged at t = " + std::to_string(time),
                                      time);
            }
        }
        update_peaks();
        if (step % options.record_stride == 0 || step == steps) {
            record(time);
        }
    }
    return trace;
}

std::vector<std::vector<double>> spacing_errors(const SimulationTrace& trace) {
    const std::size_t samples = trace.times.size();
    std::vector<std::vector<double>> spacing(static_cast<std::size_t>(trace.n),
                                             std::vector<double>(samples, 0.0));
    for (int i = 1; i <= trace.n; ++i) {
        const auto& current = trace.error_series(i, 0);
        const auto* previous = i >= 2 ? &trace.error_series(i - 1, 0) : nullptr;
        for (std::size_t s = 0; s < samples; ++s) {
            spacing[static_cast<std::size_t>(i - 1)][s] =
                (previous ? (*previous)[s] : 0.0) - current[s];
        }
    }
    return spacing;
}

PropagationMetrics propagation_metrics(const SimulationTrace& trace) {
    PropagationMetrics metrics;
    metrics.peaks = trace.peaks;
    metrics.ratios.reserve(static_cast<std::size_t>(trace.n > 0 ? trace.n - 1 : 0));
    for (int i = 2; i <= trace.n; ++i) {
        const double prev = metrics.peaks[static_cast<std::size_t>(i - 2)];
        const double curr = metrics.peaks[static_cast<std::size_t>(i - 1)];
        if (prev > 0.0) {
            metrics.ratios.emplace_back(curr / prev);
        } else {
            metrics.ratios.emplace_back(std::nullopt);
        }
    }
    metrics.settling.reserve(static_cast<std::size_t>(trace.n));
    for (int i = 1; i <= trace.n; ++i) {
        const double peak = metrics.peaks[static_cast<std::size_t>(i - 1)];
        if (peak <= 0.0) {
            metrics.settling.emplace_back(std::nullopt);
            continue;
        }
        const double threshold = 0.01 * peak;
        const auto& series = trace.spacing_series(i);
        std::size_t last_violation = series.size();  // sentinel: none
        for (std::size_t s = series.size(); s-- > 0;) {
            if (std::abs(series[s]) >= threshold) {
                last_violation = s;
                break;
            }
        }
        if (last_violation == series.size()) {
            metrics.settling.emplace_back(trace.times.front());
        } else if (last_violation + 1 >= series.size()) {
            metrics.settling.emplace_back(std::nullopt);  // never settles in the window
        } else {
            metrics.settling.emplace_back(trace.times[last_violation + 1]);
        }
    }
    return metrics;
}

}  // namespace stringstab
