#include <cctype>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <mblight/errors.hpp>
#include <mblight/scenario.hpp>

namespace mblight {

real source_value(const source& src, real t)
{
    return std::visit(
        [t](const auto& w) -> real {
            using T = std::decay_t<decltype(w)>;
            const real carrier =
                std::cos(2.0 * PI * w.carrier_freq * t - w.carrier_phase);
            if constexpr (std::is_same_v<T, sech_pulse>) {
                return w.amplitude /
                    std::cosh(w.envelope_rate * t - w.envelope_shift) *
                    carrier;
            } else {
                const real s = (t - w.peak_time) / w.width;
                return w.amplitude * std::exp(-s * s) * carrier;
            }
        },
        src.wave);
}

record record::from_name(const std::string& name, real sample_interval,
                         std::optional<real> position)
{
    record rec;
    rec.name = name;
    rec.sample_interval = sample_interval;
    rec.position = position;
    if (name == "e") {
        rec.quantity = record_quantity::electric;
    } else if (name == "h") {
        rec.quantity = record_quantity::magnetic;
    } else if (name == "inv12") {
        rec.quantity = record_quantity::inversion;
        rec.row = 2;
        rec.col = 1;
    } else if (name.size() == 3 && name[0] == 'd' &&
               std::isdigit(static_cast<unsigned char>(name[1])) &&
               std::isdigit(static_cast<unsigned char>(name[2]))) {
        rec.quantity = record_quantity::density;
        rec.row = static_cast<unsigned>(name[1] - '0');
        rec.col = static_cast<unsigned>(name[2] - '0');
    } else {
        throw std::invalid_argument("record name " + name +
                                    " does not name a quantity");
    }
    return rec;
}

std::vector<real> sample_ic_field(const ic_field& ic, std::size_t count)
{
    std::vector<real> out(count, 0.0);
    if (const auto* c = std::get_if<ic_field_const>(&ic)) {
        std::fill(out.begin(), out.end(), c->value);
    } else if (const auto* r = std::get_if<ic_field_random>(&ic)) {
        std::mt19937_64 gen(r->seed);
        for (auto& v : out) {
            const real u = static_cast<real>(gen() >> 11) * 0x1.0p-53;
            v = r->amplitude * (2.0 * u - 1.0);
        }
    } else {
        const auto& curve = std::get<ic_field_curve>(ic);
        if (curve.samples.size() != count) {
            throw std::invalid_argument(
                "initial field curve has " +
                std::to_string(curve.samples.size()) + " samples, expected " +
                std::to_string(count));
        }
        out = curve.samples;
    }
    return out;
}

scenario::scenario(std::string name, unsigned num_gridpoints, real end_time,
                   qm_operator ic_density, ic_field ic_e, ic_field ic_h,
                   std::optional<unsigned> num_timesteps)
  : m_name(std::move(name)), m_num_gridpoints(num_gridpoints),
    m_end_time(end_time), m_ic_density(std::move(ic_density)),
    m_ic_e(std::move(ic_e)), m_ic_h(std::move(ic_h)),
    m_num_timesteps(num_timesteps)
{
    set_num_gridpoints(num_gridpoints);
    set_end_time(end_time);
}

void scenario::set_num_gridpoints(unsigned n)
{
    if (n < 1) {
        throw std::invalid_argument("scenario: at least one grid point "
                                    "required");
    }
    m_num_gridpoints = n;
}

void scenario::set_end_time(real t)
{
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("scenario: end time must be positive");
    }
    m_end_time = t;
}

void scenario::add_source(source src)
{
    const bool ok = std::visit(
        [](const auto& w) {
            using T = std::decay_t<decltype(w)>;
            bool good = std::isfinite(w.amplitude) &&
                std::isfinite(w.carrier_freq) && std::isfinite(w.carrier_phase);
            if constexpr (std::is_same_v<T, sech_pulse>) {
                good = good && w.envelope_rate > 0.0 &&
                    std::isfinite(w.envelope_rate) &&
                    std::isfinite(w.envelope_shift);
            } else {
                good = good && w.width > 0.0 && std::isfinite(w.width) &&
                    std::isfinite(w.peak_time);
            }
            return good;
        },
        src.wave);
    if (!ok) {
        throw std::invalid_argument("source " + src.name +
                                    ": invalid waveform parameters");
    }
    m_sources.push_back(std::move(src));
}

void scenario::add_record(record rec)
{
    if (rec.name.empty()) {
        throw std::invalid_argument("record name must not be empty");
    }
    if (!(rec.sample_interval >= 0.0) || !std::isfinite(rec.sample_interval)) {
        throw std::invalid_argument("record " + rec.name +
                                    ": sample interval must be >= 0");
    }
    for (const auto& r : m_records) {
        if (r.name == rec.name) {
            throw std::invalid_argument("duplicate record name " + rec.name);
        }
    }
    m_records.push_back(std::move(rec));
}

std::vector<std::string> scenario_issues(const device& dev,
                                         const scenario& sce)
{
    std::vector<std::string> issues;
    if (dev.regions().empty()) {
        issues.emplace_back("device has no regions");
        return issues;
    }
    const real len = dev.length();
    const unsigned nx = sce.num_gridpoints();
    if (nx > 1 && !(len > 0.0)) {
        issues.emplace_back("device of zero length requires a single grid "
                            "point");
    }
    if (nx == 1 && !sce.num_timesteps()) {
        issues.emplace_back("a single grid point requires the number of "
                            "time steps to be given");
    }
    if (sce.num_timesteps() && *sce.num_timesteps() < 2) {
        issues.emplace_back("number of time steps must be at least 2");
    }

    /* quantum mechanical dimensions */
    std::size_t qm_dim = 0;
    for (std::size_t i = 0; i < dev.regions().size(); ++i) {
        const auto& mat = dev.material_of(i);
        if (!mat->qm()) {
            continue;
        }
        const std::size_t n = mat->qm()->dim();
        if (qm_dim != 0 && n != qm_dim) {
            issues.emplace_back("material " + mat->id() + " has " +
                                std::to_string(n) +
                                " levels, other quantum materials have " +
                                std::to_string(qm_dim));
        }
        qm_dim = qm_dim == 0 ? n : qm_dim;
    }
    const std::size_t ic_dim = sce.ic_density().dim();
    if (qm_dim != 0 && ic_dim != qm_dim) {
        issues.emplace_back("initial density matrix has dimension " +
                            std::to_string(ic_dim) + ", quantum materials " +
                            std::to_string(qm_dim));
    }
    const std::string rho_issue = check_density_matrix(sce.ic_density());
    if (!rho_issue.empty()) {
        issues.emplace_back("initial density matrix: " + rho_issue);
    }

    /* initial fields */
    auto check_curve = [&](const ic_field& ic, std::size_t count,
                           const char* which) {
        if (const auto* c = std::get_if<ic_field_curve>(&ic)) {
            if (c->samples.size() != count) {
                issues.emplace_back(std::string("initial ") + which +
                                    " curve has " +
                                    std::to_string(c->samples.size()) +
                                    " samples, expected " +
                                    std::to_string(count));
            }
        }
    };
    check_curve(sce.ic_e(), nx, "electric field");
    check_curve(sce.ic_h(), nx + 1, "magnetic field");

    auto inside = [len](real x) { return x >= 0.0 && x <= len; };

    for (const auto& src : sce.sources()) {
        if (!inside(src.position)) {
            issues.emplace_back("source " + src.name +
                                " lies outside the device");
        }
    }

    std::set<std::string> names;
    for (const auto& rec : sce.records()) {
        if (!names.insert(rec.name).second) {
            issues.emplace_back("duplicate record name " + rec.name);
        }
        if (rec.position && !inside(*rec.position)) {
            issues.emplace_back("record " + rec.name +
                                " lies outside the device");
        }
        if (rec.quantity == record_quantity::density) {
            if (qm_dim == 0) {
                issues.emplace_back("record " + rec.name +
                                    " requires a quantum material");
            } else if (rec.row < 1 || rec.col < 1 || rec.row > qm_dim ||
                       rec.col > qm_dim) {
                issues.emplace_back("record " + rec.name +
                                    ": level index out of range 1.." +
                                    std::to_string(qm_dim));
            }
        } else if (rec.quantity == record_quantity::inversion) {
            if (qm_dim != 2) {
                issues.emplace_back("record " + rec.name +
                                    ": inversion requires two-level "
                                    "materials");
            }
        }
    }
    return issues;
}

void scenario_validate(const device& dev, const scenario& sce)
{
    auto issues = scenario_issues(dev, sce);
    if (!issues.empty()) {
        throw validation_error(std::move(issues));
    }
}

} // namespace mblight
