#ifndef MBLIGHT_DETAIL_CELL_KERNEL_HPP
#define MBLIGHT_DETAIL_CELL_KERNEL_HPP

#include <cstddef>
#include <Eigen/Dense>
#include <mblight/quantum.hpp>
#include <mblight/types.hpp>

/*
 * Density matrix update kernels, templated on the number of levels so the
 * solver can use fixed-size matrices for small N. Levels == Eigen::Dynamic
 * is the general path (used by the public stepper functions).
 */

namespace mblight::detail {

template <int Levels>
struct kernel_types
{
    using cmat = Eigen::Matrix<complex, Levels, Levels>;
    using rmat = Eigen::Matrix<real, Levels, Levels>;
    using rvec = Eigen::Matrix<real, Levels, 1>;
};

/**
 * Constant per-material data of the cell update for a fixed time step.
 */
template <int Levels>
struct kernel_constants
{
    using cmat = typename kernel_types<Levels>::cmat;
    using rmat = typename kernel_types<Levels>::rmat;

    int dim = 0;
    real dt = 0.0;
    real density = 0.0;
    /* H0 dt / (2 hbar) and mu dt / (2 hbar) for the Cayley transform */
    cmat h0_half;
    cmat mu_half;
    /* H0 / hbar and mu / hbar for the master equation right-hand side */
    cmat h0_hbar;
    cmat mu_hbar;
    /* dipole operator, for the polarization */
    cmat mu;
    /* relaxation half step */
    rmat pop_half;
    rmat coh_half;
    /* dissipator rates */
    rmat rate_matrix;
    rmat coh_decay;

    kernel_constants(const qm_description& desc,
                     const propagator_workspace& ws)
    {
        dim = static_cast<int>(desc.dim());
        dt = ws.dt;
        density = desc.density_3d();
        const cmatrix h0 = desc.hamiltonian().matrix();
        const cmatrix dip = desc.dipole_op().matrix();
        h0_half = h0 * (dt / (2.0 * HBAR));
        mu_half = dip * (dt / (2.0 * HBAR));
        h0_hbar = h0 / HBAR;
        mu_hbar = dip / HBAR;
        mu = dip;
        pop_half = ws.population_half;
        coh_half = ws.coherence_half;
        rate_matrix = desc.relaxation().rate_matrix();
        coh_decay = desc.relaxation().coherence_decay();
    }
};

/* rho <- relaxation half step applied to rho */
template <int Levels, typename Mat>
inline void relax_half_step(const kernel_constants<Levels>& k, Mat& rho)
{
    using rvec = typename kernel_types<Levels>::rvec;
    const int n = k.dim;
    rvec pop = rvec::Zero(n);
    for (int i = 0; i < n; ++i) {
        pop(i) = rho(i, i).real();
    }
    const rvec updated = k.pop_half * pop;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i == j) {
                rho(i, i) = complex(updated(i), 0.0);
            } else {
                rho(i, j) *= k.coh_half(i, j);
            }
        }
    }
}

/*
 * K = U - I for the Cayley propagator U = (I + iA)^-1 (I - iA),
 * A = (H0 - mu E) dt / (2 hbar). Equals -2i (I + iA)^-1 A.
 */
template <int Levels>
inline typename kernel_types<Levels>::cmat
cayley_increment(const kernel_constants<Levels>& k, real e_field)
{
    using cmat = typename kernel_types<Levels>::cmat;
    const int n = k.dim;
    const complex im(0.0, 1.0);
    const cmat a = k.h0_half - e_field * k.mu_half;
    const cmat denom = cmat::Identity(n, n) + im * a;
    if constexpr (Levels == 2 || Levels == Eigen::Dynamic) {
        if (n == 2) {
            const complex det =
                denom(0, 0) * denom(1, 1) - denom(0, 1) * denom(1, 0);
            const complex s = complex(0.0, -2.0) / det;
            cmat inc(2, 2);
            inc(0, 0) = s * (denom(1, 1) * a(0, 0) - denom(0, 1) * a(1, 0));
            inc(0, 1) = s * a(0, 1);
            inc(1, 0) = s * a(1, 0);
            inc(1, 1) = s * (denom(0, 0) * a(1, 1) - denom(1, 0) * a(0, 1));
            return inc;
        }
    }
    if constexpr (Levels != Eigen::Dynamic) {
        /* elimination without pivoting: the Hermitian part of D is I */
        cmat lu = denom;
        cmat x = complex(0.0, -2.0) * a;
        for (int p = 0; p < Levels; ++p) {
            const complex inv = 1.0 / lu(p, p);
            for (int i = p + 1; i < Levels; ++i) {
                const complex f = lu(i, p) * inv;
                for (int j = p + 1; j < Levels; ++j) {
                    lu(i, j) -= f * lu(p, j);
                }
                for (int j = 0; j < Levels; ++j) {
                    x(i, j) -= f * x(p, j);
                }
            }
        }
        for (int p = Levels - 1; p >= 0; --p) {
            const complex inv = 1.0 / lu(p, p);
            for (int j = 0; j < Levels; ++j) {
                complex s = x(p, j);
                for (int q = p + 1; q < Levels; ++q) {
                    s -= lu(p, q) * x(q, j);
                }
                x(p, j) = s * inv;
            }
        }
        return x;
    }
    return complex(0.0, -2.0) * denom.partialPivLu().solve(a);
}

/* U rho U^dagger = rho + Q + Q^dagger + K Q^dagger with Q = K rho */
template <int Levels, typename Mat>
inline void splitting_step(const kernel_constants<Levels>& k, Mat& rho,
                           real e_field)
{
    using cmat = typename kernel_types<Levels>::cmat;
    const int n = k.dim;
    relax_half_step(k, rho);
    const cmat inc = cayley_increment(k, e_field);
    const cmat q = inc * rho;
    /* upper triangle, mirrored */
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i <= j; ++i) {
            complex upd = q(i, j) + std::conj(q(j, i));
            for (int l = 0; l < n; ++l) {
                upd += inc(i, l) * std::conj(q(j, l));
            }
            rho(i, j) += upd;
        }
        rho(j, j) = rho(j, j).real();
        for (int i = 0; i < j; ++i) {
            rho(j, i) = std::conj(rho(i, j));
        }
    }
    relax_half_step(k, rho);
}

template <int Levels, typename Mat>
inline typename kernel_types<Levels>::cmat
rhs(const kernel_constants<Levels>& k, const Mat& rho, real e_field)
{
    using cmat = typename kernel_types<Levels>::cmat;
    using rvec = typename kernel_types<Levels>::rvec;
    const int n = k.dim;
    const complex im(0.0, 1.0);
    const cmat h = k.h0_hbar - e_field * k.mu_hbar;
    cmat out = -im * (h * rho - rho * h);
    rvec pop = rvec::Zero(n);
    for (int i = 0; i < n; ++i) {
        pop(i) = rho(i, i).real();
    }
    const rvec dpop = k.rate_matrix * pop;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i == j) {
                out(i, i) += dpop(i);
            } else {
                out(i, j) -= k.coh_decay(i, j) * rho(i, j);
            }
        }
    }
    return out;
}

template <int Levels, typename Mat>
inline void rk4_step(const kernel_constants<Levels>& k, Mat& rho,
                     real e_field)
{
    using cmat = typename kernel_types<Levels>::cmat;
    const real dt = k.dt;
    const cmat r0 = rho;
    const cmat k1 = rhs(k, r0, e_field);
    const cmat k2 = rhs(k, cmat(r0 + 0.5 * dt * k1), e_field);
    const cmat k3 = rhs(k, cmat(r0 + 0.5 * dt * k2), e_field);
    const cmat k4 = rhs(k, cmat(r0 + dt * k3), e_field);
    const cmat next = r0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = 0.5 * (next + next.adjoint());
}

/* Tr(mu (rho_new - rho_old)), real part */
template <int Levels, typename MatA, typename MatB>
inline real dipole_trace_change(const kernel_constants<Levels>& k,
                                const MatA& rho_new, const MatB& rho_old)
{
    const int n = k.dim;
    real sum = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            /* Tr(mu D) = sum_ij mu_ij D_ji */
            const complex d = rho_new(j, i) - rho_old(j, i);
            sum += (k.mu(i, j) * d).real();
        }
    }
    return sum;
}

} // namespace mblight::detail

#endif
