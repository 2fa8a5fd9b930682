#include "stringstab/linalg.hpp"

#include <cmath>
#include <utility>

namespace stringstab {

std::complex<double> lu_determinant(std::vector<std::complex<double>> a, int n) {
    std::complex<double> det{1.0, 0.0};
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(a[static_cast<std::size_t>(col) * n + col]);
        for (int row = col + 1; row < n; ++row) {
            double mag = std::abs(a[static_cast<std::size_t>(row) * n + col]);
            if (mag > best) {
                best = mag;
                pivot = row;
            }
        }
        if (best == 0.0) {
            return {0.0, 0.0};
        }
        if (pivot != col) {
            for (int j = col; j < n; ++j) {
                std::swap(a[static_cast<std::size_t>(pivot) * n + j],
                          a[static_cast<std::size_t>(col) * n + j]);
            }
            det = -det;
        }
        const std::complex<double> diag = a[static_cast<std::size_t>(col) * n + col];
        det *= diag;
        for (int row = col + 1; row < n; ++row) {
            const std::complex<double> factor = a[static_cast<std::size_t>(row) * n + col] / diag;
            if (factor == std::complex<double>{0.0, 0.0}) continue;
            for (int j = col + 1; j < n; ++j) {
                a[static_cast<std::size_t>(row) * n + j] -=
                    factor * a[static_cast<std::size_t>(col) * n + j];
            }
        }
    }
    return det;
}

}  // namespace stringstab
