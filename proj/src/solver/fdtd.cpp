#include <algorithm>
#include <atomic>
#include <barrier>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <stdexcept>
#include <thread>
#include <mblight/errors.hpp>
#include <mblight/fdtd.hpp>
#include "cell_stepper.hpp"

namespace mblight {

grid_layout init_fdtd_simulation(const device& dev, const scenario& sce)
{
    if (dev.regions().empty()) {
        throw std::invalid_argument("device has no regions");
    }
    grid_layout grid;
    grid.num_x = sce.num_gridpoints();
    const real end = sce.end_time();

    if (grid.num_x == 1) {
        if (!sce.num_timesteps() || *sce.num_timesteps() < 2) {
            throw std::invalid_argument(
                "a single grid point requires at least 2 time steps");
        }
        grid.num_t = *sce.num_timesteps();
        grid.dt = end / (grid.num_t - 1);
        grid.dx = 0.0;
        return grid;
    }

    const real len = dev.length();
    if (!(len > 0.0)) {
        throw std::invalid_argument("device of zero length requires a "
                                    "single grid point");
    }
    real c_max = 0.0;
    for (std::size_t i = 0; i < dev.regions().size(); ++i) {
        c_max = std::max(c_max, dev.material_of(i)->light_speed());
    }
    grid.dx = len / (grid.num_x - 1);
    const real dt0 = grid.courant * grid.dx / c_max;
    const real steps = std::ceil(end / dt0);
    if (!(steps < 4.0e9)) {
        throw std::invalid_argument("time step count exceeds 2^32");
    }
    grid.num_t = static_cast<unsigned>(steps) + 1;
    grid.dt = end / (grid.num_t - 1);
    return grid;
}

cell_coefficients get_fdtd_constants(const material& mat, real dt, real dx)
{
    cell_coefficients c;
    const real eps = mat.permittivity();
    const real x = 0.5 * dt * mat.conductivity() / eps;
    c.a_prime = (1.0 - x) / (1.0 + x);
    c.b_prime = (dt / eps) / (1.0 + x);
    c.c_prime = dx > 0.0 ? dt / (dx * mat.permeability()) : 0.0;
    c.inv_dx = dx > 0.0 ? 1.0 / dx : 0.0;
    c.gamma = mat.overlap_factor();
    return c;
}

boundary_coefficients get_boundary_coefficients(const material& edge_mat,
                                                real reflectivity, real dt,
                                                real dx, boundary_side side)
{
    boundary_coefficients bc;
    const real r = std::sqrt(reflectivity);
    if (r >= 1.0) {
        return bc;
    }
    const real zeta = (1.0 - r) / (1.0 + r);
    const real a = edge_mat.permittivity() * dx / (2.0 * dt);
    const real b = 1.0 / (2.0 * zeta * edge_mat.impedance());
    bc.keep = (a - b) / (a + b);
    bc.drive = (side == boundary_side::left ? 1.0 : -1.0) / (a + b);
    return bc;
}

bool fdtd_state_view::has_density(std::size_t cell) const
{
    return rho_offset != nullptr && cell < rho_offset->size() &&
        (*rho_offset)[cell] >= 0;
}

cmatrix fdtd_state_view::density(std::size_t cell) const
{
    if (!has_density(cell)) {
        throw std::out_of_range("cell " + std::to_string(cell) +
                                " has no density matrix");
    }
    const auto n = static_cast<Eigen::Index>(dim);
    return Eigen::Map<const cmatrix>(rho_store->data() + (*rho_offset)[cell],
                                     n, n);
}

unsigned default_thread_count()
{
    if (const char* env = std::getenv("MBLIGHT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 1024) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

/* contiguous run of cells with the same quantum description */
struct qm_segment
{
    std::size_t begin;
    std::size_t end;
    std::size_t offset;
    const detail::cell_stepper* stepper;
};

struct record_plan
{
    record rec;
    std::size_t interval;
    /* first sampled index into e (cells) or h */
    std::size_t first;
    result res;
};

std::size_t nearest_cell(real x, real dx, std::size_t count)
{
    if (dx <= 0.0) {
        return 0;
    }
    const auto idx = static_cast<std::size_t>(std::floor(x / dx + 0.5));
    return std::min(idx, count - 1);
}

} // namespace

fdtd_solver::fdtd_solver(stepper_kind kind, const solver_options& opts)
  : m_kind(kind), m_opts(opts)
{
}

std::string fdtd_solver::name() const
{
    return m_kind == stepper_kind::splitting ? "fdtd-reg-cayley" : "fdtd-rk4";
}

void fdtd_solver::set_observer(fdtd_observer obs, std::size_t every)
{
    m_observer = std::move(obs);
    m_observer_every = std::max<std::size_t>(1, every);
}

std::vector<result> fdtd_solver::run(const device& dev, const scenario& sce)
{
    scenario_validate(dev, sce);
    m_grid = init_fdtd_simulation(dev, sce);
    const grid_layout grid = m_grid;
    const std::size_t nx = grid.num_x;
    const std::size_t nt = grid.num_t;
    const real dt = grid.dt;
    const real dx = grid.dx;

    /* per cell coefficients */
    std::vector<std::shared_ptr<const material>> cell_mat(nx);
    std::vector<real> coef_a(nx), coef_bp(nx), coef_bh(nx);
    for (std::size_t m = 0; m < nx; ++m) {
        cell_mat[m] = dev.material_at(m * dx);
        const auto c = get_fdtd_constants(*cell_mat[m], dt, dx);
        coef_a[m] = c.a_prime;
        coef_bp[m] = c.b_prime * c.gamma;
        coef_bh[m] = c.b_prime * c.inv_dx;
    }
    std::vector<real> coef_c(nx + 1, 0.0);
    for (std::size_t m = 1; m < nx; ++m) {
        const auto mat = dev.material_at((m - 0.5) * dx);
        coef_c[m] = get_fdtd_constants(*mat, dt, dx).c_prime;
    }

    /* density matrices */
    const std::size_t dim = sce.ic_density().dim();
    const std::size_t stride = dim * dim;
    std::map<const material*, std::unique_ptr<detail::cell_stepper>> steppers;
    std::vector<std::ptrdiff_t> rho_offset(nx, -1);
    std::vector<qm_segment> segments;
    std::size_t num_qm = 0;
    for (std::size_t m = 0; m < nx; ++m) {
        const material* mat = cell_mat[m].get();
        if (!mat->qm()) {
            continue;
        }
        if (mat->qm()->dim() != dim) {
            throw invalid_state_error("material " + mat->id() +
                                      " does not match the initial density "
                                      "matrix dimension");
        }
        auto it = steppers.find(mat);
        if (it == steppers.end()) {
            it = steppers
                     .emplace(mat, detail::make_cell_stepper(*mat->qm(), dt,
                                                             m_kind))
                     .first;
        }
        rho_offset[m] = static_cast<std::ptrdiff_t>(num_qm * stride);
        if (!segments.empty() && segments.back().end == m &&
            segments.back().stepper == it->second.get()) {
            segments.back().end = m + 1;
        } else {
            segments.push_back({ m, m + 1, num_qm * stride, it->second.get() });
        }
        ++num_qm;
    }
    std::vector<complex> rho(num_qm * stride);
    {
        const cmatrix init = sce.ic_density().matrix();
        for (std::size_t q = 0; q < num_qm; ++q) {
            std::copy(init.data(), init.data() + stride,
                      rho.begin() + q * stride);
        }
    }

    /* fields */
    std::vector<real> e = sample_ic_field(sce.ic_e(), nx);
    std::vector<real> h = sample_ic_field(sce.ic_h(), nx + 1);
    std::vector<real> p_rate(nx, 0.0);

    /* boundaries */
    boundary_coefficients bc_left, bc_right;
    if (nx > 1) {
        bc_left = get_boundary_coefficients(*cell_mat.front(),
                                            reflectivity_of(dev.bc_left()), dt,
                                            dx, boundary_side::left);
        bc_right = get_boundary_coefficients(*cell_mat.back(),
                                             reflectivity_of(dev.bc_right()),
                                             dt, dx, boundary_side::right);
    }

    /* sources */
    std::vector<std::pair<std::size_t, const source*>> sources;
    for (const auto& src : sce.sources()) {
        sources.emplace_back(nearest_cell(src.position, dx, nx), &src);
    }

    /* records */
    std::vector<record_plan> plans;
    for (const auto& rec : sce.records()) {
        record_plan plan;
        plan.rec = rec;
        plan.interval = rec.sample_interval > 0.0
            ? std::max<std::size_t>(
                  1, static_cast<std::size_t>(
                         std::llround(rec.sample_interval / dt)))
            : 1;
        const bool is_h = rec.quantity == record_quantity::magnetic;
        const std::size_t count = is_h ? nx + 1 : nx;
        result& res = plan.res;
        res.name = rec.name;
        res.is_complex = rec.is_complex();
        res.rows = (nt - 1) / plan.interval + 1;
        res.dt_sample = plan.interval * dt;
        res.t0 = rec.quantity == record_quantity::electric ? 0.0 : -0.5 * dt;
        res.dx = dx;
        if (rec.position) {
            plan.first = is_h ? std::min<std::size_t>(
                                    nx, dx > 0.0 ? static_cast<std::size_t>(
                                                       std::floor(*rec.position /
                                                                      dx +
                                                                  1.0))
                                                 : 0)
                              : nearest_cell(*rec.position, dx, nx);
            res.cols = 1;
        } else {
            plan.first = 0;
            res.cols = count;
        }
        res.x0 = (static_cast<real>(plan.first) - (is_h ? 0.5 : 0.0)) * dx;
        res.real_part.assign(res.rows * res.cols, 0.0);
        if (res.is_complex) {
            res.imag_part.assign(res.rows * res.cols, 0.0);
        }
        plans.push_back(std::move(plan));
    }

    auto sample = [&](std::size_t step) {
        for (auto& plan : plans) {
            if (step % plan.interval != 0) {
                continue;
            }
            result& res = plan.res;
            const std::size_t row = step / plan.interval;
            real* re = res.real_part.data() + row * res.cols;
            real* im = res.is_complex ? res.imag_part.data() + row * res.cols
                                      : nullptr;
            for (std::size_t c = 0; c < res.cols; ++c) {
                const std::size_t idx = plan.first + c;
                switch (plan.rec.quantity) {
                case record_quantity::electric:
                    re[c] = e[idx];
                    break;
                case record_quantity::magnetic:
                    re[c] = h[idx];
                    break;
                case record_quantity::inversion:
                    if (rho_offset[idx] >= 0) {
                        const complex* r = rho.data() + rho_offset[idx];
                        re[c] = r[1 + dim].real() - r[0].real();
                    }
                    break;
                case record_quantity::density:
                    if (rho_offset[idx] >= 0) {
                        const complex v = rho[rho_offset[idx] +
                                              (plan.rec.row - 1) +
                                              (plan.rec.col - 1) * dim];
                        re[c] = v.real();
                        if (im != nullptr) {
                            im[c] = v.imag();
                        }
                    }
                    break;
                }
            }
        }
    };

    fdtd_state_view view;
    view.grid = &m_grid;
    view.e = &e;
    view.h = &h;
    view.p_rate = &p_rate;
    view.rho_store = &rho;
    view.rho_offset = &rho_offset;
    view.dim = dim;
    auto observe = [&](std::size_t step) {
        if (m_observer && step % m_observer_every == 0) {
            view.step = step;
            view.time = step * dt;
            m_observer(view);
        }
    };

    sample(0);
    observe(0);

    /* worker partition */
    unsigned num_threads =
        m_opts.num_threads > 0 ? m_opts.num_threads : default_thread_count();
    num_threads = static_cast<unsigned>(
        std::clamp<std::size_t>(num_threads, 1, std::max<std::size_t>(nx, 1)));
    std::vector<std::size_t> bounds(num_threads + 1);
    for (unsigned t = 0; t <= num_threads; ++t) {
        bounds[t] = nx * t / num_threads;
    }

    auto phase_one = [&](std::size_t b, std::size_t end) {
        for (std::size_t m = std::max<std::size_t>(b, 1); m < end; ++m) {
            h[m] += coef_c[m] * (e[m] - e[m - 1]);
        }
        for (const auto& seg : segments) {
            const std::size_t lo = std::max(seg.begin, b);
            const std::size_t hi = std::min(seg.end, end);
            if (lo >= hi) {
                continue;
            }
            seg.stepper->step(rho.data() + seg.offset +
                                  (lo - seg.begin) * stride,
                              e.data() + lo, p_rate.data() + lo, hi - lo);
        }
    };

    auto phase_two = [&](std::size_t b, std::size_t end) {
        std::size_t lo = b;
        std::size_t hi = end;
        if (nx > 1) {
            /* edge cells belong to the boundaries */
            lo = std::max<std::size_t>(lo, 1);
            hi = std::min(hi, nx - 1);
        }
        for (std::size_t m = lo; m < hi; ++m) {
            e[m] = coef_a[m] * e[m] - coef_bp[m] * p_rate[m] +
                coef_bh[m] * (h[m + 1] - h[m]);
        }
    };

    std::size_t step = 0;
    std::atomic<bool> abort{ false };
    std::exception_ptr failure;

    auto complete_step = [&]() noexcept {
        try {
            ++step;
            if (nx > 1) {
                e[0] = bc_left.keep * e[0] + bc_left.drive * h[1];
                e[nx - 1] = bc_right.keep * e[nx - 1] +
                    bc_right.drive * h[nx - 1];
            }
            const real t = step * dt;
            for (const auto& [idx, src] : sources) {
                const real v = source_value(*src, t);
                if (src->kind == source_kind::hard) {
                    e[idx] = v;
                } else {
                    e[idx] += v;
                }
            }
            if (step % 1024 == 0 || step == nt - 1) {
                const bool finite =
                    std::all_of(e.begin(), e.end(),
                                [](real v) { return std::isfinite(v); }) &&
                    std::all_of(h.begin(), h.end(),
                                [](real v) { return std::isfinite(v); });
                if (!finite) {
                    throw std::runtime_error(
                        "non-finite field value detected at time step " +
                        std::to_string(step));
                }
            }
            sample(step);
            observe(step);
        } catch (...) {
            failure = std::current_exception();
            abort.store(true);
        }
    };

    std::barrier sync_phase(static_cast<std::ptrdiff_t>(num_threads));
    std::barrier sync_step(static_cast<std::ptrdiff_t>(num_threads),
                           complete_step);

    auto worker = [&](unsigned tid) {
        const std::size_t b = bounds[tid];
        const std::size_t end = bounds[tid + 1];
        for (std::size_t n = 0; n + 1 < nt; ++n) {
            phase_one(b, end);
            sync_phase.arrive_and_wait();
            phase_two(b, end);
            sync_step.arrive_and_wait();
            if (abort.load()) {
                break;
            }
        }
    };

    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < num_threads; ++t) {
            pool.emplace_back(worker, t);
        }
        worker(0);
    }

    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<result> out;
    out.reserve(plans.size());
    for (auto& plan : plans) {
        out.push_back(std::move(plan.res));
    }
    return out;
}

} // namespace mblight
