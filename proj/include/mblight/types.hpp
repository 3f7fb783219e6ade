#ifndef MBLIGHT_TYPES_HPP
#define MBLIGHT_TYPES_HPP

#include <complex>
#include <Eigen/Dense>

namespace mblight {

using real = double;
using complex = std::complex<real>;

/* column-major dense matrices; density matrices use the same layout */
using cmatrix = Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic>;
using rmatrix = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic>;
using rvector = Eigen::Matrix<real, Eigen::Dynamic, 1>;

/* physical constants (SI, CODATA 2018) */
inline constexpr real HBAR = 1.054571817e-34;
inline constexpr real E0 = 1.602176634e-19;
inline constexpr real C0 = 299792458.0;
inline constexpr real MU0 = 1.25663706212e-6;
inline constexpr real EPS0 = 1.0 / (MU0 * C0 * C0);
inline constexpr real PI = 3.14159265358979323846;

} // namespace mblight

#endif
