#ifndef MBLIGHT_RESULT_HPP
#define MBLIGHT_RESULT_HPP

#include <cstddef>
#include <string>
#include <vector>
#include <mblight/types.hpp>

namespace mblight {

/**
 * Sampled spatiotemporal trace of one recorded quantity, row-major with
 * one row per time sample. Row r was taken at t0 + r * dt_sample and
 * column c at x0 + c * dx.
 */
struct result
{
    std::string name;
    std::size_t rows = 0;
    std::size_t cols = 0;
    bool is_complex = false;
    std::vector<real> real_part;
    std::vector<real> imag_part;
    real t0 = 0.0;
    real dt_sample = 0.0;
    real x0 = 0.0;
    real dx = 0.0;

    real at(std::size_t row, std::size_t col) const
    {
        return real_part[row * cols + col];
    }
};

} // namespace mblight

#endif
