#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <mblight/errors.hpp>
#include <mblight/material.hpp>

namespace mblight {

material::material(std::string id, std::optional<qm_description> qm,
                   real rel_permittivity, real overlap_factor, real losses,
                   real rel_permeability)
  : m_id(std::move(id)), m_qm(std::move(qm)),
    m_rel_permittivity(rel_permittivity), m_overlap_factor(overlap_factor),
    m_losses(losses), m_rel_permeability(rel_permeability)
{
    if (m_id.empty()) {
        throw std::invalid_argument("material: id must not be empty");
    }
    if (!(m_rel_permittivity >= 1.0) || !std::isfinite(m_rel_permittivity)) {
        throw std::invalid_argument("material " + m_id +
                                    ": relative permittivity must be >= 1");
    }
    if (!(m_rel_permeability > 0.0) || !std::isfinite(m_rel_permeability)) {
        throw std::invalid_argument("material " + m_id +
                                    ": relative permeability must be > 0");
    }
    if (!(m_overlap_factor >= 0.0 && m_overlap_factor <= 1.0)) {
        throw std::invalid_argument("material " + m_id +
                                    ": overlap factor must lie in [0, 1]");
    }
    if (!(m_losses >= 0.0) || !std::isfinite(m_losses)) {
        throw std::invalid_argument("material " + m_id +
                                    ": losses must be non-negative");
    }
}

real material::light_speed() const
{
    return 1.0 / std::sqrt(permittivity() * permeability());
}

real material::impedance() const
{
    return std::sqrt(permeability() / permittivity());
}

real material::conductivity() const
{
    return 2.0 * m_losses * permittivity() * light_speed();
}

real material::losses_from_conductivity(real sigma, real rel_permittivity,
                                        real rel_permeability)
{
    const real eps = EPS0 * rel_permittivity;
    const real mu = MU0 * rel_permeability;
    return 0.5 * sigma * std::sqrt(mu / eps);
}

namespace {

struct library_state
{
    std::mutex mtx;
    std::map<std::string, std::shared_ptr<const material>> items;
};

library_state& library()
{
    static library_state state;
    return state;
}

} // namespace

void material_library::add(material mat)
{
    auto& lib = library();
    std::lock_guard lock(lib.mtx);
    const std::string id = mat.id();
    if (lib.items.count(id) != 0) {
        throw conflict_error("material " + id + " already exists");
    }
    lib.items.emplace(id, std::make_shared<const material>(std::move(mat)));
}

void material_library::ensure(const material& mat)
{
    auto& lib = library();
    std::lock_guard lock(lib.mtx);
    auto it = lib.items.find(mat.id());
    if (it == lib.items.end()) {
        lib.items.emplace(mat.id(), std::make_shared<const material>(mat));
    } else if (!(*it->second == mat)) {
        throw conflict_error("material " + mat.id() +
                             " already exists with different properties");
    }
}

std::shared_ptr<const material> material_library::get(const std::string& id)
{
    auto& lib = library();
    std::lock_guard lock(lib.mtx);
    auto it = lib.items.find(id);
    if (it == lib.items.end()) {
        throw not_found_error("material " + id + " not found");
    }
    return it->second;
}

bool material_library::contains(const std::string& id)
{
    auto& lib = library();
    std::lock_guard lock(lib.mtx);
    return lib.items.count(id) != 0;
}

std::vector<std::string> material_library::ids()
{
    auto& lib = library();
    std::lock_guard lock(lib.mtx);
    std::vector<std::string> out;
    for (const auto& [id, mat] : lib.items) {
        out.push_back(id);
    }
    return out;
}

} // namespace mblight
