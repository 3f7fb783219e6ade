#include <cmath>
#include <sstream>
#include <stdexcept>
#include <mblight/quantum.hpp>

namespace mblight {

qm_operator::qm_operator(std::vector<real> main_diag,
                         std::vector<complex> off_diag)
  : m_main_diag(std::move(main_diag)), m_off_diag(std::move(off_diag))
{
    const std::size_t n = m_main_diag.size();
    if (n == 0) {
        throw std::invalid_argument("qm_operator: main diagonal is empty");
    }
    const std::size_t expected = n * (n - 1) / 2;
    if (m_off_diag.empty()) {
        m_off_diag.assign(expected, complex(0.0, 0.0));
    } else if (m_off_diag.size() != expected) {
        std::ostringstream msg;
        msg << "qm_operator: " << n << " levels require " << expected
            << " off-diagonal entries, got " << m_off_diag.size();
        throw std::invalid_argument(msg.str());
    }
}

qm_operator qm_operator::from_matrix(const cmatrix& m)
{
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("qm_operator: matrix must be square");
    }
    const std::size_t n = m.rows();
    std::vector<real> diag(n);
    std::vector<complex> off(n * (n - 1) / 2);
    for (std::size_t col = 0; col < n; ++col) {
        diag[col] = m(col, col).real();
        for (std::size_t row = 0; row < col; ++row) {
            off[off_diag_index(row, col)] = m(row, col);
        }
    }
    return qm_operator(std::move(diag), std::move(off));
}

cmatrix qm_operator::matrix() const
{
    const std::size_t n = dim();
    cmatrix m(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        m(col, col) = complex(m_main_diag[col], 0.0);
        for (std::size_t row = 0; row < col; ++row) {
            const complex v = m_off_diag[off_diag_index(row, col)];
            m(row, col) = v;
            m(col, row) = std::conj(v);
        }
    }
    return m;
}

qm_operator make_operator(std::vector<real> main_diag,
                          std::vector<complex> off_diag)
{
    return qm_operator(std::move(main_diag), std::move(off_diag));
}

cmatrix operator_matrix(const qm_operator& op) { return op.matrix(); }

std::string check_density_matrix(const qm_operator& rho)
{
    real trace = 0.0;
    for (real p : rho.main_diagonal()) {
        if (!(p >= 0.0 && p <= 1.0)) {
            return "population outside [0, 1]";
        }
        trace += p;
    }
    if (std::abs(trace - 1.0) > 1e-12) {
        return "trace differs from 1";
    }
    Eigen::SelfAdjointEigenSolver<cmatrix> eig(rho.matrix(),
                                               Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) {
        return "matrix is not positive semidefinite";
    }
    return {};
}

} // namespace mblight
