#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <mblight/quantum.hpp>

namespace mblight {

rmatrix diagonal_generator(std::size_t dim, std::size_t k)
{
    if (k < 1 || k >= dim) {
        throw std::invalid_argument("diagonal_generator: k out of range");
    }
    rmatrix f = rmatrix::Zero(dim, dim);
    const real norm = 1.0 / std::sqrt(static_cast<real>(k * (k + 1)));
    for (std::size_t s = 0; s < k; ++s) {
        f(s, s) = norm;
    }
    f(k, k) = -static_cast<real>(k) * norm;
    return f;
}

lindblad_relaxation::lindblad_relaxation(std::vector<std::vector<real>> rates,
                                         std::vector<real> pure_dephasing)
  : m_dim(rates.size()), m_rates(std::move(rates)),
    m_pure_deph(std::move(pure_dephasing))
{
    const std::size_t n = m_dim;
    if (n == 0) {
        throw std::invalid_argument("lindblad_relaxation: empty rate matrix");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (m_rates[i].size() != n) {
            throw std::invalid_argument(
                "lindblad_relaxation: rate matrix is not square");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && !(m_rates[i][j] >= 0.0 &&
                            std::isfinite(m_rates[i][j]))) {
                std::ostringstream msg;
                msg << "lindblad_relaxation: rate (" << i + 1 << ", " << j + 1
                    << ") must be finite and non-negative";
                throw std::invalid_argument(msg.str());
            }
        }
    }

    const std::size_t num_pairs = n * (n - 1) / 2;
    if (m_pure_deph.empty()) {
        m_pure_deph.assign(num_pairs, 0.0);
    } else if (m_pure_deph.size() != num_pairs) {
        throw std::invalid_argument(
            "lindblad_relaxation: pure dephasing vector must have N(N-1)/2 "
            "entries");
    }
    for (real g : m_pure_deph) {
        if (!(g >= 0.0 && std::isfinite(g))) {
            throw std::invalid_argument(
                "lindblad_relaxation: pure dephasing rates must be finite and "
                "non-negative");
        }
    }

    m_rate_matrix = rmatrix::Zero(n, n);
    m_inv_lifetimes = rvector::Zero(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            if (i != j) {
                m_rate_matrix(i, j) = m_rates[i][j];
                m_inv_lifetimes(j) += m_rates[i][j];
            }
        }
        m_rate_matrix(j, j) = -m_inv_lifetimes(j);
    }

    m_coherence_decay = rmatrix::Zero(n, n);
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const real rate =
                0.5 * (m_inv_lifetimes(i) + m_inv_lifetimes(j)) +
                m_pure_deph[off_diag_index(i, j)];
            m_coherence_decay(i, j) = rate;
            m_coherence_decay(j, i) = rate;
        }
    }

    /* fit C = diag(c_1 .. c_{N-1}) to
     * gamma_ij,p = 1/2 sum_m c_m (F_m,ii - F_m,jj)^2 */
    if (n < 2) {
        m_coeff = rmatrix::Zero(0, 0);
        return;
    }
    rmatrix design(num_pairs, n - 1);
    rvector target(num_pairs);
    std::vector<rmatrix> gens;
    for (std::size_t k = 1; k < n; ++k) {
        gens.push_back(diagonal_generator(n, k));
    }
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const std::size_t row = off_diag_index(i, j);
            target(row) = m_pure_deph[row];
            for (std::size_t m = 0; m < n - 1; ++m) {
                const real diff = gens[m](i, i) - gens[m](j, j);
                design(row, m) = 0.5 * diff * diff;
            }
        }
    }
    const rvector coeffs = design.colPivHouseholderQr().solve(target);
    m_coeff = coeffs.asDiagonal();

    const real target_norm = target.norm();
    m_residual = target_norm > 0.0
        ? (design * coeffs - target).norm() / target_norm
        : 0.0;

    const real largest = std::max(coeffs.maxCoeff(), 1.0);
    const bool psd = coeffs.minCoeff() >= -1e-9 * largest;
    m_psd_ok = psd && m_residual <= 1e-6;
    if (!m_psd_ok) {
        std::clog << "warning: pure dephasing rates do not map onto a "
                     "positive semidefinite coefficient matrix (residual "
                  << m_residual << ", min coefficient " << coeffs.minCoeff()
                  << ")\n";
    }
}

cmatrix lindblad_relaxation::apply(const cmatrix& rho) const
{
    const std::size_t n = m_dim;
    if (static_cast<std::size_t>(rho.rows()) != n ||
        static_cast<std::size_t>(rho.cols()) != n) {
        throw std::invalid_argument(
            "apply_dissipator: density matrix dimension mismatch");
    }
    rvector pop(n);
    for (std::size_t i = 0; i < n; ++i) {
        pop(i) = rho(i, i).real();
    }
    const rvector dpop = m_rate_matrix * pop;

    cmatrix out(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            out(i, j) = i == j ? complex(dpop(i), 0.0)
                               : -m_coherence_decay(i, j) * rho(i, j);
        }
    }
    return out;
}

lindblad_relaxation
make_lindblad_relaxation(std::vector<std::vector<real>> rates,
                         std::vector<real> pure_dephasing)
{
    return lindblad_relaxation(std::move(rates), std::move(pure_dephasing));
}

cmatrix apply_dissipator(const lindblad_relaxation& relax, const cmatrix& rho)
{
    return relax.apply(rho);
}

} // namespace mblight
