#include "stringstab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stringstab/errors.hpp"

namespace stringstab {

RealPolynomial::RealPolynomial(std::vector<double> ascending_coefficients)
    : coeffs_(std::move(ascending_coefficients)) {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) {
        coeffs_.pop_back();
    }
    if (coeffs_.empty()) {
        throw std::invalid_argument("RealPolynomial: zero or empty polynomial");
    }
    for (double c : coeffs_) {
        if (!std::isfinite(c)) {
            throw std::invalid_argument("RealPolynomial: non-finite coefficient");
        }
    }
}

std::complex<double> RealPolynomial::operator()(std::complex<double> x) const {
    std::complex<double> acc{0.0, 0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

double RealPolynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

std::vector<std::complex<double>> polynomial_roots(const RealPolynomial& p) {
    const int degree = p.degree();
    if (degree < 1) throw std::invalid_argument("polynomial_roots: degree must be >= 1");
    if (degree > 8) throw std::invalid_argument("polynomial_roots: degree cap is 8");

    const auto& coeffs = p.coefficients();
    std::vector<std::complex<double>> monic(coeffs.size());
    const double leading = coeffs.back();
    double max_monic = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        monic[k] = coeffs[k] / leading;
        if (k + 1 < coeffs.size()) {
            max_monic = std::max(max_monic, std::abs(coeffs[k] / leading));
        }
    }

    auto eval_monic = [&](std::complex<double> x) {
        std::complex<double> acc{0.0, 0.0};
        for (auto it = monic.rbegin(); it != monic.rend(); ++it) {
            acc = acc * x + *it;
        }
        return acc;
    };

    // Starting points on a circle, phase offset irrational so no iterate
    // lands on a symmetry axis of the root set.
    const double radius = 1.0 + max_monic;
    constexpr double phase = std::numbers::sqrt2 / 2.0;
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(degree));
    for (int k = 0; k < degree; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / degree + phase;
        roots[static_cast<std::size_t>(k)] = std::polar(radius, angle);
    }

    constexpr int kMaxIterations = 500;
    constexpr double kStepTolerance = 1e-13;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        double max_step = 0.0;
        for (int k = 0; k < degree; ++k) {
            std::complex<double> denom{1.0, 0.0};
            for (int j = 0; j < degree; ++j) {
                if (j == k) continue;
                denom *= roots[static_cast<std::size_t>(k)] - roots[static_cast<std::size_t>(j)];
            }
            if (denom == std::complex<double>{0.0, 0.0}) {
                // collided iterates: nudge apart and retry next sweep
                roots[static_cast<std::size_t>(k)] +=
                    1e-12 * (1.0 + std::abs(roots[static_cast<std::size_t>(k)]));
                max_step = 1.0;
                continue;
            }
            const std::complex<double> step =
                eval_monic(roots[static_cast<std::size_t>(k)]) / denom;
            roots[static_cast<std::size_t>(k)] -= step;
            max_step = std::max(max_step, std::abs(step));
        }
        if (max_step < kStepTolerance) break;
    }

    double coeff_scale = 0.0;
    for (double c : coeffs) coeff_scale += std::abs(c);
    const double residual_bound = 1e-10 * std::max(1.0, coeff_scale);
    double worst = 0.0;
    for (const auto& root : roots) {
        worst = std::max(worst, std::abs(p(root)));
    }
    if (worst > residual_bound) {
        throw RootFindingError("polynomial_roots: residual " + std::to_string(worst) +
                                   " exceeds bound " + std::to_string(residual_bound),
                               roots, worst);
    }

    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        const double tie = 1e-12 * (1.0 + std::max(std::abs(a), std::abs(b)));
        if (std::abs(a.real() - b.real()) > tie) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

const char* to_string(RouthVerdict v) {
    switch (v) {
        case RouthVerdict::Stable: return "stable";
        case RouthVerdict::Unstable: return "unstable";
        case RouthVerdict::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

RouthVerdict routh_hurwitz_stable(const RealPolynomial& p) {
    const int degree = p.degree();
    if (degree < 1) throw std::invalid_argument("routh_hurwitz_stable: degree must be >= 1");

    std::vector<double> coeffs = p.coefficients();
    if (coeffs.back() < 0.0) {
        for (double& c : coeffs) c = -c;
    }

    const std::size_t width = static_cast<std::size_t>(degree) / 2 + 1;
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(degree) + 1,
                                          std::vector<double>(width, 0.0));
    for (int k = degree; k >= 0; --k) {
        const std::size_t row = static_cast<std::size_t>((degree - k) % 2);
        const std::size_t col = static_cast<std::size_t>((degree - k) / 2);
        rows[row][col] = coeffs[static_cast<std::size_t>(k)];
    }

    constexpr double kZeroTolerance = 1e-12;
    auto row_scale = [](const std::vector<double>& row) {
        double scale = 0.0;
        for (double v : row) scale = std::max(scale, std::abs(v));
        return scale;
    };

    for (std::size_t r = 2; r <= static_cast<std::size_t>(degree); ++r) {
        const auto& above = rows[r - 1];
        const auto& above2 = rows[r - 2];
        const double pivot = above[0];
        if (std::abs(pivot) <= kZeroTolerance * row_scale(above)) {
            return RouthVerdict::Indeterminate;  // zero pivot or zero row
        }
        for (std::size_t j = 0; j + 1 < width; ++j) {
            rows[r][j] = (pivot * above2[j + 1] - above2[0] * above[j + 1]) / pivot;
        }
    }

    bool negative = false;
    for (std::size_t r = 0; r <= static_cast<std::size_t>(degree); ++r) {
        const double entry = rows[r][0];
        if (std::abs(entry) <= kZeroTolerance * row_scale(rows[r])) {
            return RouthVerdict::Indeterminate;
        }
        if (entry < 0.0) negative = true;
    }
    return negative ? RouthVerdict::Unstable : RouthVerdict::Stable;
}

}  // namespace stringstab
