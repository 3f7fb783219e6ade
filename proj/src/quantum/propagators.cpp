#include <cmath>
#include <stdexcept>
#include <mblight/detail/cell_kernel.hpp>
#include <mblight/linalg.hpp>
#include <mblight/quantum.hpp>

namespace mblight {

namespace {

cmatrix kron(const cmatrix& a, const cmatrix& b)
{
    cmatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

void check_square(const cmatrix& rho, std::size_t n, const char* who)
{
    if (static_cast<std::size_t>(rho.rows()) != n ||
        static_cast<std::size_t>(rho.cols()) != n) {
        throw std::invalid_argument(std::string(who) +
                                    ": density matrix dimension mismatch");
    }
}

} // namespace

qm_description::qm_description(real density_3d, qm_operator hamiltonian,
                               qm_operator dipole_op,
                               lindblad_relaxation relaxation)
  : m_density(density_3d), m_hamiltonian(std::move(hamiltonian)),
    m_dipole(std::move(dipole_op)), m_relax(std::move(relaxation))
{
    if (!(m_density > 0.0)) {
        throw std::invalid_argument(
            "qm_description: density of quantum systems must be positive");
    }
    if (m_dipole.dim() != m_hamiltonian.dim() ||
        m_relax.dim() != m_hamiltonian.dim()) {
        throw std::invalid_argument(
            "qm_description: Hamiltonian, dipole operator and relaxation "
            "superoperator dimensions differ");
    }
}

qm_description make_two_level_desc(real density_3d, real transition_freq,
                                   real dipole_length, real gamma1,
                                   real gamma2, real equilibrium_inversion)
{
    if (!(gamma1 >= 0.0)) {
        throw std::invalid_argument("two-level: gamma1 must be non-negative");
    }
    if (!(gamma2 >= 0.5 * gamma1)) {
        throw std::invalid_argument(
            "two-level: gamma2 < gamma1/2 implies negative pure dephasing");
    }
    if (!(std::abs(equilibrium_inversion) <= 1.0)) {
        throw std::invalid_argument(
            "two-level: equilibrium inversion must lie in [-1, 1]");
    }
    const real half_energy = 0.5 * HBAR * transition_freq;
    qm_operator h0({ -half_energy, half_energy });
    qm_operator mu({ 0.0, 0.0 }, { complex(-E0 * dipole_length, 0.0) });

    const real g12 = 0.5 * gamma1 * (1.0 - equilibrium_inversion);
    const real g21 = 0.5 * gamma1 * (1.0 + equilibrium_inversion);
    lindblad_relaxation relax({ { 0.0, g12 }, { g21, 0.0 } },
                              { gamma2 - 0.5 * gamma1 });

    return qm_description(density_3d, std::move(h0), std::move(mu),
                          std::move(relax));
}

cmatrix build_dissipator_matrix(const lindblad_relaxation& relax)
{
    const std::size_t n = relax.dim();
    const cmatrix id = cmatrix::Identity(n, n);
    cmatrix out = cmatrix::Zero(n * n, n * n);

    /* jump operators |i><j| with rate gamma_ij */
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const real rate = relax.rates()[i][j];
            if (i == j || rate == 0.0) {
                continue;
            }
            cmatrix jump = cmatrix::Zero(n, n);
            jump(i, j) = 1.0;
            const cmatrix jdj = jump.adjoint() * jump;
            out += rate * (kron(jump.conjugate(), jump) -
                           0.5 * kron(id, jdj) -
                           0.5 * kron(jdj.transpose(), id));
        }
    }

    /* pure dephasing acts on the coherences alone */
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const real g = relax.pure_dephasing()[off_diag_index(i, j)];
            out(i + n * j, i + n * j) -= g;
            out(j + n * i, j + n * i) -= g;
        }
    }
    return out;
}

cmatrix build_liouvillian(const qm_description& desc, real e_field)
{
    const std::size_t n = desc.dim();
    const cmatrix id = cmatrix::Identity(n, n);
    const cmatrix h =
        desc.hamiltonian().matrix() - e_field * desc.dipole_op().matrix();
    const complex factor(0.0, -1.0 / HBAR);
    return factor * (kron(id, h) - kron(h.transpose(), id)) +
        build_dissipator_matrix(desc.relaxation());
}

cmatrix step_exact(const qm_description& desc, const cmatrix& rho,
                   real e_field, real dt)
{
    const std::size_t n = desc.dim();
    check_square(rho, n, "step_exact");
    if (!(dt >= 0.0)) {
        throw std::invalid_argument("step_exact: dt must be non-negative");
    }
    const cmatrix prop = expm(build_liouvillian(desc, e_field) * dt);
    const Eigen::Map<const Eigen::VectorXcd> vec(rho.data(), n * n);
    const Eigen::VectorXcd next = prop * vec;
    return Eigen::Map<const cmatrix>(next.data(), n, n);
}

propagator_workspace precompute_relaxation_propagator(const qm_description& desc,
                                                      real dt)
{
    if (!(dt > 0.0)) {
        throw std::invalid_argument(
            "precompute_relaxation_propagator: dt must be positive");
    }
    const auto& relax = desc.relaxation();
    propagator_workspace ws;
    ws.dim = desc.dim();
    ws.dt = dt;
    ws.population_half = expm(relax.rate_matrix() * (0.5 * dt));
    ws.coherence_half = (-0.5 * dt * relax.coherence_decay()).array().exp();
    return ws;
}

cmatrix step_splitting(const propagator_workspace& ws,
                       const qm_description& desc, const cmatrix& rho,
                       real e_field)
{
    check_square(rho, desc.dim(), "step_splitting");
    if (ws.dim != desc.dim()) {
        throw std::invalid_argument(
            "step_splitting: workspace built for a different description");
    }
    const detail::kernel_constants<Eigen::Dynamic> k(desc, ws);
    cmatrix out = rho;
    detail::splitting_step(k, out, e_field);
    return out;
}

cmatrix master_equation_rhs(const qm_description& desc, const cmatrix& rho,
                            real e_field)
{
    check_square(rho, desc.dim(), "master_equation_rhs");
    propagator_workspace ws;
    ws.dim = desc.dim();
    ws.population_half = rmatrix::Identity(ws.dim, ws.dim);
    ws.coherence_half = rmatrix::Ones(ws.dim, ws.dim);
    const detail::kernel_constants<Eigen::Dynamic> k(desc, ws);
    return detail::rhs(k, rho, e_field);
}

cmatrix step_rk4(const qm_description& desc, const cmatrix& rho, real e_field,
                 real dt)
{
    check_square(rho, desc.dim(), "step_rk4");
    if (dt == 0.0) {
        return rho;
    }
    propagator_workspace ws;
    ws.dim = desc.dim();
    ws.dt = dt;
    ws.population_half = rmatrix::Identity(ws.dim, ws.dim);
    ws.coherence_half = rmatrix::Ones(ws.dim, ws.dim);
    const detail::kernel_constants<Eigen::Dynamic> k(desc, ws);
    cmatrix out = rho;
    detail::rk4_step(k, out, e_field);
    return out;
}

real polarization_rate(const qm_description& desc, const cmatrix& rho_new,
                       const cmatrix& rho_old, real dt)
{
    check_square(rho_new, desc.dim(), "polarization_rate");
    check_square(rho_old, desc.dim(), "polarization_rate");
    if (!(dt > 0.0)) {
        throw std::invalid_argument("polarization_rate: dt must be positive");
    }
    const cmatrix mu = desc.dipole_op().matrix();
    const complex tr = (mu * (rho_new - rho_old)).trace();
    return desc.density_3d() * tr.real() / dt;
}

} // namespace mblight
