#ifndef MBLIGHT_SOLVER_CELL_STEPPER_HPP
#define MBLIGHT_SOLVER_CELL_STEPPER_HPP

#include <cstddef>
#include <memory>
#include <mblight/fdtd.hpp>
#include <mblight/quantum.hpp>

namespace mblight::detail {

/**
 * Advances the density matrices of a run of cells sharing one quantum
 * description by one time step and stores the rate of polarization
 * n3D Tr(mu (rho_new - rho_old)) / dt of every cell.
 */
class cell_stepper
{
public:
    virtual ~cell_stepper() = default;

    virtual std::size_t dim() const = 0;

    /* rho holds dim * dim column-major values per cell */
    virtual void step(complex* rho, const real* e, real* p_rate,
                      std::size_t count) const = 0;
};

std::unique_ptr<cell_stepper> make_cell_stepper(const qm_description& desc,
                                                real dt, stepper_kind kind);

} // namespace mblight::detail

#endif
