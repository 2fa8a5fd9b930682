#include "stringstab/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stringstab {

namespace {
constexpr int kMaxOrder = 8;
constexpr int kMaxClosedLoopDim = 512;
}  // namespace

ProtocolConfig::ProtocolConfig(int order, std::vector<double> gains, double coupling)
    : order_(order), gains_(std::move(gains)), coupling_(coupling) {
    if (order_ < 1 || order_ > kMaxOrder) {
        throw std::invalid_argument("ProtocolConfig: order must be within 1.." +
                                    std::to_string(kMaxOrder));
    }
    if (static_cast<int>(gains_.size()) != order_) {
        throw std::invalid_argument("ProtocolConfig: expected " + std::to_string(order_) +
                                    " gains, got " + std::to_string(gains_.size()));
    }
    for (std::size_t k = 0; k < gains_.size(); ++k) {
        if (!(gains_[k] > 0.0) || !std::isfinite(gains_[k])) {
            throw std::invalid_argument("ProtocolConfig: gain gamma_" + std::to_string(k) +
                                        " must be strictly positive");
        }
    }
    if (!(coupling_ > 0.0) || !std::isfinite(coupling_)) {
        throw std::invalid_argument("ProtocolConfig: coupling must be strictly positive");
    }
}

RealPolynomial shaping_polynomial(const ProtocolConfig& cfg) {
    return RealPolynomial(cfg.gains());
}

RealPolynomial mode_polynomial(const ProtocolConfig& cfg, double mu) {
    if (!std::isfinite(mu)) throw std::invalid_argument("mode_polynomial: mu must be finite");
    std::vector<double> coeffs(static_cast<std::size_t>(cfg.order()) + 1, 0.0);
    for (int k = 0; k < cfg.order(); ++k) {
        coeffs[static_cast<std::size_t>(k)] = -mu * cfg.gain(k);
    }
    coeffs.back() = 1.0;
    return RealPolynomial(std::move(coeffs));
}

StabilityAssessment internal_stability_check(const Topology& t, const ProtocolConfig& cfg) {
    StabilityAssessment result;
    result.modes.reserve(static_cast<std::size_t>(t.n()));
    result.overall = true;
    for (int i = 0; i < t.n(); ++i) {
        const double diag = t.laplacian(i, i);
        ModeAnalysis mode;
        mode.mu = -cfg.coupling() * diag;
        const RealPolynomial poly = mode_polynomial(cfg, mode.mu);
        mode.roots = polynomial_roots(poly);
        mode.routh = routh_hurwitz_stable(poly);
        mode.margin = mode.roots.front().real();
        for (const auto& root : mode.roots) {
            mode.margin = std::max(mode.margin, root.real());
        }
        mode.stable = mode.margin < 0.0;
        if (diag > 0.0 && !(mode.routh == RouthVerdict::Stable && mode.stable)) {
            result.overall = false;
        }
        result.modes.push_back(std::move(mode));
    }
    return result;
}

DenseMatrix build_closed_loop_matrix(const Topology& t, const ProtocolConfig& cfg) {
    const int n = t.n();
    const int m = cfg.order();
    const int dim = m * n;
    if (dim > kMaxClosedLoopDim) {
        throw std::invalid_argument("build_closed_loop_matrix: dimension " + std::to_string(dim) +
                                    " exceeds cap " + std::to_string(kMaxClosedLoopDim));
    }

    DenseMatrix result(dim, dim);
    for (int k = 0; k + 1 < m; ++k) {
        for (int i = 0; i < n; ++i) {
            result(k * n + i, (k + 1) * n + i) = 1.0;
        }
    }
    for (int k = 0; k < m; ++k) {
        const double scale = -cfg.gain(k) * cfg.coupling();
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) {
                const double entry = t.laplacian(i, j);
                if (entry != 0.0) {
                    result((m - 1) * n + i, k * n + j) = scale * entry;
                }
            }
        }
    }
    return result;
}

double characteristic_residual(const DenseMatrix& m, std::complex<double> lambda) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("characteristic_residual: matrix must be square");
    }
    const int n = m.rows();
    if (n > kMaxClosedLoopDim) {
        throw std::invalid_argument("characteristic_residual: dimension exceeds cap");
    }
    std::vector<std::complex<double>> shifted(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            shifted[static_cast<std::size_t>(i) * n + j] =
                (i == j ? lambda : std::complex<double>{0.0, 0.0}) - m(i, j);
        }
    }
    return std::abs(lu_determinant(std::move(shifted), n));
}

}  // namespace stringstab
