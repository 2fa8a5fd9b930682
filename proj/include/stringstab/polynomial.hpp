#pragma once

#include <complex>
#include <vector>

namespace stringstab {

/// Real polynomial with coefficients stored in ascending degree order.
/// Trailing zero coefficients are stripped on construction; the zero or
/// empty polynomial is rejected.
class RealPolynomial {
public:
    explicit RealPolynomial(std::vector<double> ascending_coefficients);

    [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return coeffs_; }

    [[nodiscard]] std::complex<double> operator()(std::complex<double> x) const;
    [[nodiscard]] double operator()(double x) const;

private:
    std::vector<double> coeffs_;
};

/// All roots (with multiplicity) of a polynomial of degree 1..8, found by
/// simultaneous iteration from symmetric starting points on a circle of
/// radius 1 + max|monic coefficient|, with an irrational phase offset to
/// break symmetric configurations. Each returned root satisfies
/// |p(root)| <= 1e-10 * max(1, sum|coefficients|); otherwise a
/// RootFindingError carrying the best iterate is thrown. Roots are sorted by
/// ascending real part, ties by ascending imaginary part.
std::vector<std::complex<double>> polynomial_roots(const RealPolynomial& p);

enum class RouthVerdict { Stable, Unstable, Indeterminate };

[[nodiscard]] const char* to_string(RouthVerdict v);

/// Routh-Hurwitz test on the full Routh array. Stable iff every first-column
/// entry is strictly positive; Unstable iff any is strictly negative;
/// Indeterminate when an entry vanishes (within 1e-12 of zero relative to
/// its row scale), including degenerate zero rows. The leading coefficient
/// is normalized positive first.
RouthVerdict routh_hurwitz_stable(const RealPolynomial& p);

}  // namespace stringstab
