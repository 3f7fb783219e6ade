#ifndef MBLIGHT_FDTD_HPP
#define MBLIGHT_FDTD_HPP

#include <cstddef>
#include <functional>
#include <vector>
#include <mblight/solver.hpp>

namespace mblight {

/** Courant number of the FDTD grid, fixed by design. */
inline constexpr real COURANT = 0.5;

struct grid_layout
{
    unsigned num_x = 0;
    real dx = 0.0;
    unsigned num_t = 0;
    real dt = 0.0;
    real courant = COURANT;
};

/**
 * Grid sizing. For N_x > 1: dx = L/(N_x - 1), dt0 = C dx / c_max,
 * N_t = ceil(T/dt0) + 1 and dt = T/(N_t - 1). A single grid point uses the
 * scenario's time step count, dt = T/(N_t - 1) and dx = 0.
 */
grid_layout init_fdtd_simulation(const device& dev, const scenario& sce);

/** Update coefficients of a cell. */
struct cell_coefficients
{
    real a_prime = 1.0;
    real b_prime = 0.0;
    real c_prime = 0.0;
    real gamma = 0.0;
    real inv_dx = 0.0;
};

/** a' = (1 - x)/(1 + x), b' = (dt/eps)/(1 + x), c' = dt/(dx mu) with
 *  x = dt sigma/(2 eps). dx == 0 gives c' = inv_dx = 0. */
cell_coefficients get_fdtd_constants(const material& mat, real dt, real dx);

/**
 * Edge cell update of a boundary with power reflectivity R. The boundary is
 * an impedance sheet Z = eta (1 - r)/(1 + r), r = sqrt(R), terminating the
 * half cell between the edge E sample and its neighboring H sample. R = 1
 * is an electric mirror (E = 0), R = 0 a matched absorber. The update is
 * semi-implicit in the edge value and unconditionally stable.
 */
struct boundary_coefficients
{
    /* E_new = keep * E_old + drive * h_neighbor */
    real keep = 0.0;
    real drive = 0.0;
};

enum class boundary_side { left, right };

boundary_coefficients get_boundary_coefficients(const material& edge_mat,
                                                real reflectivity, real dt,
                                                real dx, boundary_side side);

enum class stepper_kind { splitting, rk4 };

/**
 * Read-only view of the solver state passed to observers. After step s the
 * electric field is sampled at s dt, the magnetic field and the density
 * matrices at (s - 1/2) dt.
 */
class fdtd_state_view
{
public:
    std::size_t step = 0;
    real time = 0.0;
    const grid_layout* grid = nullptr;
    const std::vector<real>* e = nullptr;
    const std::vector<real>* h = nullptr;
    const std::vector<real>* p_rate = nullptr;

    bool has_density(std::size_t cell) const;

    /** Density matrix of a cell; throws std::out_of_range for cells
     *  without quantum material. */
    cmatrix density(std::size_t cell) const;

    /* state storage, set by the solver */
    const std::vector<complex>* rho_store = nullptr;
    const std::vector<std::ptrdiff_t>* rho_offset = nullptr;
    std::size_t dim = 0;
};

using fdtd_observer = std::function<void(const fdtd_state_view&)>;

/**
 * Finite-difference time-domain solver on the staggered Yee grid, weakly
 * coupled to per-cell density matrices. Each step runs two phases over
 * contiguous per-worker cell ranges separated by barriers:
 *   1. H update and density matrix step with E^n, rate of polarization;
 *   2. E update.
 * Boundaries, sources, record sampling and observers are handled by the
 * barrier completion on a single thread. Results do not depend on the
 * number of workers.
 */
class fdtd_solver : public solver
{
public:
    explicit fdtd_solver(stepper_kind kind, const solver_options& opts = {});

    std::string name() const override;

    std::vector<result> run(const device& dev, const scenario& sce) override;

    /** Calls \p obs with the initial state and after every \p every steps. */
    void set_observer(fdtd_observer obs, std::size_t every = 1);

    const grid_layout& grid() const { return m_grid; }

private:
    stepper_kind m_kind;
    solver_options m_opts;
    fdtd_observer m_observer;
    std::size_t m_observer_every = 1;
    grid_layout m_grid;
};

/** Number of worker threads: MBLIGHT_THREADS if set, else the hardware
 *  concurrency (at least 1). */
unsigned default_thread_count();

} // namespace mblight

#endif
