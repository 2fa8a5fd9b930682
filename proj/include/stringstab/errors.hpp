#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace stringstab {

/// Thrown when a transfer function is evaluated at (or within guard distance
/// of) a pole. Carries the magnitude of the offending denominator.
class PoleProximityError : public std::domain_error {
public:
    PoleProximityError(const std::string& what, double denominator_magnitude)
        : std::domain_error(what), den_mag_(denominator_magnitude) {}

    [[nodiscard]] double denominator_magnitude() const noexcept { return den_mag_; }

private:
    double den_mag_;
};

/// Thrown when the polynomial root iteration fails to meet its residual
/// bound within the iteration cap. Carries the best iterate seen.
class RootFindingError : public std::runtime_error {
public:
    RootFindingError(const std::string& what,
                     std::vector<std::complex<double>> best_roots,
                     double residual)
        : std::runtime_error(what), best_roots_(std::move(best_roots)), residual_(residual) {}

    [[nodiscard]] const std::vector<std::complex<double>>& best_roots() const noexcept {
        return best_roots_;
    }
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    std::vector<std::complex<double>> best_roots_;
    double residual_;
};

/// Thrown when a simulation state leaves the finite range; carries the time
/// at which divergence was detected.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}

    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace stringstab
