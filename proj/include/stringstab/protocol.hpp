#pragma once

#include <complex>
#include <vector>

#include "stringstab/linalg.hpp"
#include "stringstab/polynomial.hpp"
#include "stringstab/topology.hpp"

namespace stringstab {

/// Consensus protocol of order m with gains gamma_0..gamma_{m-1} and uniform
/// predecessor coupling strength a. All gains and the coupling must be
/// strictly positive; 1 <= m <= 8.
class ProtocolConfig {
public:
    ProtocolConfig(int order, std::vector<double> gains, double coupling = 1.0);

    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] const std::vector<double>& gains() const noexcept { return gains_; }
    [[nodiscard]] double gain(int k) const { return gains_[static_cast<std::size_t>(k)]; }
    [[nodiscard]] double coupling() const noexcept { return coupling_; }

private:
    int order_;
    std::vector<double> gains_;
    double coupling_;
};

/// Gain-weighted shaping polynomial sum_k gamma_k s^k, degree m-1.
RealPolynomial shaping_polynomial(const ProtocolConfig& cfg);

/// Degree-m mode polynomial lambda^m - mu * sum_k gamma_k lambda^k, ascending
/// coefficients [-mu*gamma_0, ..., -mu*gamma_{m-1}, 1]. mu is the eigenvalue
/// of -L already scaled by the coupling: callers pass mu = -a*d for Laplacian
/// diagonal entry d. Documented here to prevent double scaling.
RealPolynomial mode_polynomial(const ProtocolConfig& cfg, double mu);

/// Per-mode stability data for one Laplacian eigenvalue.
struct ModeAnalysis {
    double mu = 0.0;                          ///< eigenvalue of -a*L for this mode
    std::vector<std::complex<double>> roots;  ///< m closed-loop eigenvalues
    RouthVerdict routh = RouthVerdict::Indeterminate;
    double margin = 0.0;  ///< max over roots of Re(lambda)
    bool stable = false;  ///< margin < 0 (strict)
};

struct StabilityAssessment {
    std::vector<ModeAnalysis> modes;  ///< one entry per Laplacian diagonal entry
    bool overall = false;
};

/// Mode-by-mode internal stability of the leader-referenced error system.
/// `overall` requires every mode with positive diagonal entry to be Routh
/// Stable with a strictly negative root margin, and the two routes to agree.
/// Zero-diagonal modes (leaderless analyses) are reported but excluded from
/// the overall verdict.
StabilityAssessment internal_stability_check(const Topology& t, const ProtocolConfig& cfg);

/// Block-companion closed-loop matrix of the m*n-dimensional error system:
/// identity super-diagonal blocks and bottom block row
/// [-gamma_0*a*L, ..., -gamma_{m-1}*a*L]. Rejects m*n > 512.
DenseMatrix build_closed_loop_matrix(const Topology& t, const ProtocolConfig& cfg);

/// |det(lambda*I - M)| by complex LU with partial pivoting. Used as an
/// oracle that mode-polynomial roots are eigenvalues of M; a singular
/// factorization yields residual 0, which is the signal.
double characteristic_residual(const DenseMatrix& m, std::complex<double> lambda);

}  // namespace stringstab
