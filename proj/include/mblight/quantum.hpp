#ifndef MBLIGHT_QUANTUM_HPP
#define MBLIGHT_QUANTUM_HPP

#include <cstddef>
#include <vector>
#include <mblight/types.hpp>

namespace mblight {

/**
 * Position of the upper-triangle element (row, col), row < col, in the
 * column-major off-diagonal vector [(0,1), (0,2), (1,2), (0,3), ...].
 * Indices are zero-based.
 */
constexpr std::size_t off_diag_index(std::size_t row, std::size_t col)
{
    return col * (col - 1) / 2 + row;
}

/**
 * Hermitian operator stored as its real main diagonal and the complex upper
 * triangle in column-major ordering. Houses Hamiltonians, dipole moment
 * operators and initial density matrices.
 */
class qm_operator
{
public:
    /**
     * Throws std::invalid_argument if \p main_diag is empty or if
     * \p off_diag is neither empty (all zero) nor of length N(N-1)/2.
     */
    explicit qm_operator(std::vector<real> main_diag,
                         std::vector<complex> off_diag = {});

    /** Builds the operator from the upper triangle of a Hermitian matrix. */
    static qm_operator from_matrix(const cmatrix& m);

    std::size_t dim() const { return m_main_diag.size(); }

    const std::vector<real>& main_diagonal() const { return m_main_diag; }

    const std::vector<complex>& off_diagonal() const { return m_off_diag; }

    /** Full N x N matrix, lower triangle conjugate of the upper one. */
    cmatrix matrix() const;

    bool operator==(const qm_operator&) const = default;

private:
    std::vector<real> m_main_diag;
    std::vector<complex> m_off_diag;
};

/** Free-function form of qm_operator construction. */
qm_operator make_operator(std::vector<real> main_diag,
                          std::vector<complex> off_diag = {});

cmatrix operator_matrix(const qm_operator& op);

/**
 * Checks the density matrix invariants: unit trace (1e-12), populations in
 * [0, 1] and positive semidefiniteness (smallest eigenvalue >= -1e-10).
 * Returns an empty string if valid, else a description of the violation.
 */
std::string check_density_matrix(const qm_operator& rho);

/**
 * Lindblad relaxation superoperator built from a scattering rate matrix and
 * pure dephasing rates.
 *
 * rates(i, j) is the rate of scattering into level i from level j; the main
 * diagonal of the input is ignored. The population dynamics follow the
 * rate matrix with inverse lifetimes -sum_{i != j} rates(i, j) on its
 * diagonal, while the coherence rho_ij decays with
 * (1/tau_i + 1/tau_j)/2 + pure_dephasing_ij.
 *
 * The pure dephasing rates are converted into a coefficient matrix C that
 * is diagonal in the basis of traceless diagonal generators
 * F_k = (sum_{s<=k} |s><s| - k |k+1><k+1|) / sqrt(k(k+1)). The conversion
 * is a least-squares fit; psd_ok() is false if C has a negative
 * eigenvalue or the fit leaves a relative residual above 1e-6. Such sets
 * are still accepted (a warning is written to std::clog).
 */
class lindblad_relaxation
{
public:
    lindblad_relaxation(std::vector<std::vector<real>> rates,
                        std::vector<real> pure_dephasing = {});

    std::size_t dim() const { return m_dim; }

    const std::vector<std::vector<real>>& rates() const { return m_rates; }

    const std::vector<real>& pure_dephasing() const { return m_pure_deph; }

    /** Population rate matrix including the -1/tau_j main diagonal. */
    const rmatrix& rate_matrix() const { return m_rate_matrix; }

    /** Inverse population lifetimes 1/tau_j. */
    const rvector& inverse_lifetimes() const { return m_inv_lifetimes; }

    /** Symmetric matrix of total coherence decay rates, zero diagonal. */
    const rmatrix& coherence_decay() const { return m_coherence_decay; }

    /** Coefficient matrix C over the N-1 diagonal generators. */
    const rmatrix& coeff_matrix() const { return m_coeff; }

    /** Relative residual of the dephasing-to-C fit. */
    real fit_residual() const { return m_residual; }

    bool psd_ok() const { return m_psd_ok; }

    /** Action of the dissipator on rho. Throws on dimension mismatch. */
    cmatrix apply(const cmatrix& rho) const;

    bool operator==(const lindblad_relaxation& other) const
    {
        return m_rates == other.m_rates && m_pure_deph == other.m_pure_deph;
    }

private:
    std::size_t m_dim;
    std::vector<std::vector<real>> m_rates;
    std::vector<real> m_pure_deph;
    rmatrix m_rate_matrix;
    rvector m_inv_lifetimes;
    rmatrix m_coherence_decay;
    rmatrix m_coeff;
    real m_residual = 0.0;
    bool m_psd_ok = true;
};

lindblad_relaxation
make_lindblad_relaxation(std::vector<std::vector<real>> rates,
                         std::vector<real> pure_dephasing);

cmatrix apply_dissipator(const lindblad_relaxation& relax, const cmatrix& rho);

/**
 * Diagonal generator F_k (k = 1..N-1) of the traceless diagonal subspace.
 */
rmatrix diagonal_generator(std::size_t dim, std::size_t k);

/**
 * Quantum mechanical description of an active medium: density of systems,
 * static Hamiltonian, dipole moment operator and relaxation superoperator.
 */
class qm_description
{
public:
    qm_description(real density_3d, qm_operator hamiltonian,
                   qm_operator dipole_op, lindblad_relaxation relaxation);

    std::size_t dim() const { return m_hamiltonian.dim(); }

    real density_3d() const { return m_density; }

    const qm_operator& hamiltonian() const { return m_hamiltonian; }

    const qm_operator& dipole_op() const { return m_dipole; }

    const lindblad_relaxation& relaxation() const { return m_relax; }

    bool operator==(const qm_description&) const = default;

private:
    real m_density;
    qm_operator m_hamiltonian;
    qm_operator m_dipole;
    lindblad_relaxation m_relax;
};

/**
 * Two-level description in the optical Bloch parameterization:
 * H0 = (hbar w21 / 2) diag(-1, 1), mu_21 = -e z21,
 * R = (gamma1 / 2) [[0, 1 - w0], [1 + w0, 0]], gamma_12,p = gamma2 - gamma1/2.
 */
qm_description make_two_level_desc(real density_3d, real transition_freq,
                                   real dipole_length, real gamma1,
                                   real gamma2, real equilibrium_inversion);

/**
 * Generator of the master equation acting on the column-stacked density
 * matrix, H = H0 - mu E. Built from the jump-operator form of the
 * relaxation, independently of lindblad_relaxation::apply.
 */
cmatrix build_liouvillian(const qm_description& desc, real e_field);

/** Dissipative part of build_liouvillian alone. */
cmatrix build_dissipator_matrix(const lindblad_relaxation& relax);

/** Reference step: unvectorize(expm(L dt) vec(rho)), E frozen. */
cmatrix step_exact(const qm_description& desc, const cmatrix& rho,
                   real e_field, real dt);

/**
 * Precomputed relaxation half step for a fixed time step dt.
 */
struct propagator_workspace
{
    std::size_t dim = 0;
    real dt = 0.0;
    /** expm(rate_matrix * dt / 2), column stochastic. */
    rmatrix population_half;
    /** exp(-coherence_decay * dt / 2), diagonal entries unused (1). */
    rmatrix coherence_half;
};

propagator_workspace precompute_relaxation_propagator(const qm_description& desc,
                                                      real dt);

/**
 * Strang splitting step: relaxation half step, Cayley-transform unitary
 * step with H = H0 - mu E, relaxation half step. Preserves Hermiticity,
 * trace and positivity for any dt.
 */
cmatrix step_splitting(const propagator_workspace& ws,
                       const qm_description& desc, const cmatrix& rho,
                       real e_field);

/**
 * Classical fourth order Runge-Kutta step with E frozen, followed by
 * symmetrization. Positivity is not guaranteed.
 */
cmatrix step_rk4(const qm_description& desc, const cmatrix& rho, real e_field,
                 real dt);

/** n3D Tr(mu (rho_new - rho_old)) / dt, the rate of the polarization. */
real polarization_rate(const qm_description& desc, const cmatrix& rho_new,
                       const cmatrix& rho_old, real dt);

/** Right-hand side of the master equation, used by the RK4 stepper. */
cmatrix master_equation_rhs(const qm_description& desc, const cmatrix& rho,
                            real e_field);

} // namespace mblight

#endif
