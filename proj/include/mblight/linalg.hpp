#ifndef MBLIGHT_LINALG_HPP
#define MBLIGHT_LINALG_HPP

#include <cmath>
#include <limits>
#include <Eigen/Dense>

namespace mblight {

/**
 * Dense matrix exponential by scaling and squaring around a truncated
 * Taylor series. The argument is scaled until its 1-norm is at most 1/2,
 * where the series converges to machine precision within ~20 terms.
 * Intended for small matrices (N^2 x N^2 with N <= 16).
 */
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
expm(const Eigen::MatrixBase<Derived>& arg)
{
    using matrix_t =
        Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using std::abs;

    const Eigen::Index n = arg.rows();
    const double norm =
        n == 0 ? 0.0 : arg.cwiseAbs().colwise().sum().maxCoeff();

    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    }

    matrix_t scaled = arg / std::ldexp(1.0, squarings);
    matrix_t result = matrix_t::Identity(n, n);
    matrix_t term = matrix_t::Identity(n, n);

    const double eps = std::numeric_limits<double>::epsilon();
    for (int k = 1; k <= 40; ++k) {
        term = (term * scaled) / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().sum() <= eps * result.cwiseAbs().sum()) {
            break;
        }
    }

    for (int s = 0; s < squarings; ++s) {
        result = (result * result).eval();
    }
    return result;
}

} // namespace mblight

#endif
