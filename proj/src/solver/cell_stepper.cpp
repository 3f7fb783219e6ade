#include "cell_stepper.hpp"
#include <algorithm>
#include <mblight/detail/cell_kernel.hpp>

namespace mblight::detail {

namespace {

template <int Levels, stepper_kind Kind>
class kernel_stepper final : public cell_stepper
{
public:
    kernel_stepper(const qm_description& desc, const propagator_workspace& ws)
      : m_k(desc, ws), m_scale(desc.density_3d() / ws.dt)
    {
    }

    std::size_t dim() const override
    {
        return static_cast<std::size_t>(m_k.dim);
    }

    void step(complex* rho, const real* e, real* p_rate,
              std::size_t count) const override
    {
        using cmat = typename kernel_types<Levels>::cmat;
        const int n = m_k.dim;
        const std::size_t stride = static_cast<std::size_t>(n) * n;
        for (std::size_t i = 0; i < count; ++i) {
            Eigen::Map<cmat> r(rho + i * stride, n, n);
            const cmat old = r;
            cmat cur = old;
            if constexpr (Kind == stepper_kind::splitting) {
                splitting_step(m_k, cur, e[i]);
            } else {
                rk4_step(m_k, cur, e[i]);
            }
            r = cur;
            p_rate[i] = m_scale * dipole_trace_change(m_k, cur, old);
        }
    }

private:
    kernel_constants<Levels> m_k;
    real m_scale;
};

/*
 * Two-level splitting step written out on the independent entries
 * (rho_11, rho_22, rho_12). Same operations as the generic kernel.
 */
class two_level_splitting final : public cell_stepper
{
public:
    two_level_splitting(const qm_description& desc,
                        const propagator_workspace& ws)
      : m_scale(desc.density_3d() / ws.dt)
    {
        const kernel_constants<2> k(desc, ws);
        m_p00 = k.pop_half(0, 0);
        m_p01 = k.pop_half(0, 1);
        m_p10 = k.pop_half(1, 0);
        m_p11 = k.pop_half(1, 1);
        m_coh = k.coh_half(0, 1);
        m_h00 = k.h0_half(0, 0).real();
        m_h11 = k.h0_half(1, 1).real();
        m_h01 = k.h0_half(0, 1);
        m_m00 = k.mu_half(0, 0).real();
        m_m11 = k.mu_half(1, 1).real();
        m_m01 = k.mu_half(0, 1);
        m_mu00 = k.mu(0, 0).real();
        m_mu11 = k.mu(1, 1).real();
        m_mu01 = k.mu(0, 1);
    }

    std::size_t dim() const override { return 2; }

    void step(complex* rho, const real* e, real* p_rate,
              std::size_t count) const override
    {
        const complex im(0.0, 1.0);
        for (std::size_t i = 0; i < count; ++i) {
            complex* r = rho + 4 * i;
            const real old00 = r[0].real();
            const real old11 = r[3].real();
            const complex old01 = r[2];

            /* relaxation half step */
            real p0 = m_p00 * old00 + m_p01 * old11;
            real p1 = m_p10 * old00 + m_p11 * old11;
            complex c = m_coh * old01;

            /* K = U - I = -2i D^-1 A, D = I + iA */
            const real a00 = m_h00 - e[i] * m_m00;
            const real a11 = m_h11 - e[i] * m_m11;
            const complex a01 = m_h01 - e[i] * m_m01;
            const complex a10 = std::conj(a01);
            const complex d00(1.0, a00);
            const complex d11(1.0, a11);
            const complex d01 = im * a01;
            const complex d10 = im * a10;
            const complex s = complex(0.0, -2.0) / (d00 * d11 - d01 * d10);
            const complex k00 = s * (d11 * a00 - d01 * a10);
            const complex k01 = s * a01;
            const complex k10 = s * a10;
            const complex k11 = s * (d00 * a11 - d10 * a01);

            /* Q = K rho, rho' = rho + Q + Q^dagger + K Q^dagger */
            const complex cc = std::conj(c);
            const complex q00 = k00 * p0 + k01 * cc;
            const complex q01 = k00 * c + k01 * p1;
            const complex q10 = k10 * p0 + k11 * cc;
            const complex q11 = k10 * c + k11 * p1;
            const complex q01c = std::conj(q01);
            const complex q10c = std::conj(q10);
            const real up0 = 2.0 * q00.real() +
                (k00 * std::conj(q00) + k01 * q01c).real();
            const real up1 = 2.0 * q11.real() +
                (k10 * q10c + k11 * std::conj(q11)).real();
            const complex upc =
                q01 + q10c + (k00 * q10c + k01 * std::conj(q11));
            p0 += up0;
            p1 += up1;
            c += upc;

            /* relaxation half step */
            const real new00 = m_p00 * p0 + m_p01 * p1;
            const real new11 = m_p10 * p0 + m_p11 * p1;
            const complex new01 = m_coh * c;

            r[0] = new00;
            r[3] = new11;
            r[2] = new01;
            r[1] = std::conj(new01);

            const complex dc = new01 - old01;
            p_rate[i] = m_scale *
                (m_mu00 * (new00 - old00) + m_mu11 * (new11 - old11) +
                 2.0 * (m_mu01 * std::conj(dc)).real());
        }
    }

private:
    real m_scale;
    real m_p00, m_p01, m_p10, m_p11, m_coh;
    real m_h00, m_h11, m_m00, m_m11, m_mu00, m_mu11;
    complex m_h01, m_m01, m_mu01;
};

/*
 * Splitting step for N >= 3, vectorized across cells: a batch of
 * `lanes` cells is stored as separate real and imaginary arrays indexed
 * [row][col][lane]. Every lane runs the same instructions, so a cell's
 * result does not depend on its position in the batch. Short batches are
 * padded with zero density matrices.
 */
constexpr int lanes = 8;

template <int N>
struct matrix_pack
{
    alignas(64) real re[N][N][lanes];
    alignas(64) real im[N][N][lanes];
};

/* d -= a b */
inline void sub_product(real* __restrict dr, real* __restrict di,
                        const real* __restrict ar, const real* __restrict ai,
                        const real* __restrict br, const real* __restrict bi)
{
    for (int l = 0; l < lanes; ++l) {
        dr[l] -= ar[l] * br[l] - ai[l] * bi[l];
        di[l] -= ar[l] * bi[l] + ai[l] * br[l];
    }
}

/* d += a b, or d += a conj(b) */
template <bool Conj>
inline void add_product(real* __restrict dr, real* __restrict di,
                        const real* __restrict ar, const real* __restrict ai,
                        const real* __restrict br, const real* __restrict bi)
{
    for (int l = 0; l < lanes; ++l) {
        const real bim = Conj ? -bi[l] : bi[l];
        dr[l] += ar[l] * br[l] - ai[l] * bim;
        di[l] += ar[l] * bim + ai[l] * br[l];
    }
}

template <int N>
class batched_splitting final : public cell_stepper
{
public:
    batched_splitting(const qm_description& desc,
                      const propagator_workspace& ws)
      : m_scale(desc.density_3d() / ws.dt)
    {
        const kernel_constants<N> k(desc, ws);
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) {
                m_h_re[i][j] = k.h0_half(i, j).real();
                m_h_im[i][j] = k.h0_half(i, j).imag();
                m_m_re[i][j] = k.mu_half(i, j).real();
                m_m_im[i][j] = k.mu_half(i, j).imag();
                m_mu_re[i][j] = k.mu(i, j).real();
                m_mu_im[i][j] = k.mu(i, j).imag();
                m_pop[i][j] = k.pop_half(i, j);
                m_coh[i][j] = k.coh_half(i, j);
            }
        }
    }

    std::size_t dim() const override { return N; }

    void step(complex* rho, const real* e, real* p_rate,
              std::size_t count) const override
    {
        for (std::size_t start = 0; start < count; start += lanes) {
            const std::size_t len =
                std::min<std::size_t>(lanes, count - start);
            step_batch(rho + start * N * N, e + start, p_rate + start, len);
        }
    }

private:
    void relax(matrix_pack<N>& r) const
    {
        real pop[N][lanes];
        for (int i = 0; i < N; ++i) {
            for (int l = 0; l < lanes; ++l) {
                pop[i][l] = r.re[i][i][l];
            }
        }
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) {
                if (i == j) {
                    continue;
                }
                for (int l = 0; l < lanes; ++l) {
                    r.re[i][j][l] *= m_coh[i][j];
                    r.im[i][j][l] *= m_coh[i][j];
                }
            }
            for (int l = 0; l < lanes; ++l) {
                real sum = 0.0;
                for (int j = 0; j < N; ++j) {
                    sum += m_pop[i][j] * pop[j][l];
                }
                r.re[i][i][l] = sum;
                r.im[i][i][l] = 0.0;
            }
        }
    }

    void step_batch(complex* rho, const real* e, real* p_rate,
                    std::size_t len) const
    {
        matrix_pack<N> r, old, lu, x, q;
        real field[lanes];
        for (int l = 0; l < lanes; ++l) {
            const bool used = static_cast<std::size_t>(l) < len;
            field[l] = used ? e[l] : 0.0;
            for (int j = 0; j < N; ++j) {
                for (int i = 0; i < N; ++i) {
                    const complex v = used ? rho[l * N * N + j * N + i] : 0.0;
                    r.re[i][j][l] = v.real();
                    r.im[i][j][l] = v.imag();
                }
            }
        }
        old = r;
        relax(r);

        /* D = I + iA and X = -2i A, A = (H0 - mu E) dt / (2 hbar) */
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) {
                for (int l = 0; l < lanes; ++l) {
                    const real a_re = m_h_re[i][j] - field[l] * m_m_re[i][j];
                    const real a_im = m_h_im[i][j] - field[l] * m_m_im[i][j];
                    lu.re[i][j][l] = (i == j ? 1.0 : 0.0) - a_im;
                    lu.im[i][j][l] = a_re;
                    x.re[i][j][l] = 2.0 * a_im;
                    x.im[i][j][l] = -2.0 * a_re;
                }
            }
        }

        /* X <- D^-1 X = U - I, elimination without pivoting */
        real inv_re[N][lanes], inv_im[N][lanes];
        for (int p = 0; p < N; ++p) {
            for (int l = 0; l < lanes; ++l) {
                const real dr = lu.re[p][p][l];
                const real di = lu.im[p][p][l];
                const real s = 1.0 / (dr * dr + di * di);
                inv_re[p][l] = dr * s;
                inv_im[p][l] = -di * s;
            }
            for (int i = p + 1; i < N; ++i) {
                real f_re[lanes] = {}, f_im[lanes] = {};
                add_product<false>(f_re, f_im, lu.re[i][p], lu.im[i][p],
                                   inv_re[p], inv_im[p]);
                for (int j = p + 1; j < N; ++j) {
                    sub_product(lu.re[i][j], lu.im[i][j], f_re, f_im,
                                lu.re[p][j], lu.im[p][j]);
                }
                for (int j = 0; j < N; ++j) {
                    sub_product(x.re[i][j], x.im[i][j], f_re, f_im,
                                x.re[p][j], x.im[p][j]);
                }
            }
        }
        for (int p = N - 1; p >= 0; --p) {
            for (int j = 0; j < N; ++j) {
                real s_re[lanes], s_im[lanes];
                for (int l = 0; l < lanes; ++l) {
                    s_re[l] = x.re[p][j][l];
                    s_im[l] = x.im[p][j][l];
                }
                for (int k = p + 1; k < N; ++k) {
                    sub_product(s_re, s_im, lu.re[p][k], lu.im[p][k],
                                x.re[k][j], x.im[k][j]);
                }
                for (int l = 0; l < lanes; ++l) {
                    x.re[p][j][l] = 0.0;
                    x.im[p][j][l] = 0.0;
                }
                add_product<false>(x.re[p][j], x.im[p][j], s_re, s_im,
                                   inv_re[p], inv_im[p]);
            }
        }

        /* Q = K rho, rho += Q + Q^dagger + K Q^dagger (upper triangle) */
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) {
                for (int l = 0; l < lanes; ++l) {
                    q.re[i][j][l] = 0.0;
                    q.im[i][j][l] = 0.0;
                }
                for (int k = 0; k < N; ++k) {
                    add_product<false>(q.re[i][j], q.im[i][j], x.re[i][k],
                                       x.im[i][k], r.re[k][j], r.im[k][j]);
                }
            }
        }
        for (int j = 0; j < N; ++j) {
            for (int i = 0; i <= j; ++i) {
                real u_re[lanes], u_im[lanes];
                for (int l = 0; l < lanes; ++l) {
                    u_re[l] = q.re[i][j][l] + q.re[j][i][l];
                    u_im[l] = q.im[i][j][l] - q.im[j][i][l];
                }
                for (int k = 0; k < N; ++k) {
                    add_product<true>(u_re, u_im, x.re[i][k], x.im[i][k],
                                      q.re[j][k], q.im[j][k]);
                }
                for (int l = 0; l < lanes; ++l) {
                    r.re[i][j][l] += u_re[l];
                    r.im[i][j][l] += u_im[l];
                }
            }
            for (int l = 0; l < lanes; ++l) {
                r.im[j][j][l] = 0.0;
            }
            for (int i = 0; i < j; ++i) {
                for (int l = 0; l < lanes; ++l) {
                    r.re[j][i][l] = r.re[i][j][l];
                    r.im[j][i][l] = -r.im[i][j][l];
                }
            }
        }
        relax(r);

        /* Tr(mu (rho_new - rho_old)) = sum_ij mu_ij d_ji */
        real trace[lanes] = {};
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) {
                for (int l = 0; l < lanes; ++l) {
                    trace[l] +=
                        m_mu_re[i][j] * (r.re[j][i][l] - old.re[j][i][l]) -
                        m_mu_im[i][j] * (r.im[j][i][l] - old.im[j][i][l]);
                }
            }
        }
        for (std::size_t l = 0; l < len; ++l) {
            for (int j = 0; j < N; ++j) {
                for (int i = 0; i < N; ++i) {
                    rho[l * N * N + j * N + i] =
                        complex(r.re[i][j][l], r.im[i][j][l]);
                }
            }
            p_rate[l] = m_scale * trace[l];
        }
    }

    real m_scale;
    real m_h_re[N][N], m_h_im[N][N];
    real m_m_re[N][N], m_m_im[N][N];
    real m_mu_re[N][N], m_mu_im[N][N];
    real m_pop[N][N], m_coh[N][N];
};

template <int Levels>
std::unique_ptr<cell_stepper> make_fixed(const qm_description& desc,
                                         const propagator_workspace& ws,
                                         stepper_kind kind)
{
    if (kind == stepper_kind::splitting) {
        if constexpr (Levels >= 3) {
            return std::make_unique<batched_splitting<Levels>>(desc, ws);
        } else {
            return std::make_unique<
                kernel_stepper<Levels, stepper_kind::splitting>>(desc, ws);
        }
    }
    return std::make_unique<kernel_stepper<Levels, stepper_kind::rk4>>(desc,
                                                                       ws);
}

} // namespace

std::unique_ptr<cell_stepper> make_cell_stepper(const qm_description& desc,
                                                real dt, stepper_kind kind)
{
    propagator_workspace ws = precompute_relaxation_propagator(desc, dt);
    switch (desc.dim()) {
    case 1:
        return make_fixed<1>(desc, ws, kind);
    case 2:
        if (kind == stepper_kind::splitting) {
            return std::make_unique<two_level_splitting>(desc, ws);
        }
        return make_fixed<2>(desc, ws, kind);
    case 3:
        return make_fixed<3>(desc, ws, kind);
    case 4:
        return make_fixed<4>(desc, ws, kind);
    case 5:
        return make_fixed<5>(desc, ws, kind);
    case 6:
        return make_fixed<6>(desc, ws, kind);
    case 7:
        return make_fixed<7>(desc, ws, kind);
    case 8:
        return make_fixed<8>(desc, ws, kind);
    default:
        return make_fixed<Eigen::Dynamic>(desc, ws, kind);
    }
}

} // namespace mblight::detail
