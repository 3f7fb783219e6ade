#include <cmath>
#include <stdexcept>
#include <mblight/device.hpp>
#include <mblight/errors.hpp>

namespace mblight {

namespace {

void check_bc(const boundary_condition& bc, const char* side)
{
    const real r = reflectivity_of(bc);
    if (!(r >= 0.0 && r <= 1.0)) {
        throw std::invalid_argument(std::string(side) +
                                    " boundary: reflectivity must lie in "
                                    "[0, 1]");
    }
}

} // namespace

real reflectivity_of(const boundary_condition& bc)
{
    return std::get<bc_reflectivity>(bc).reflectivity;
}

device::device(std::string name, boundary_condition left,
               boundary_condition right)
  : m_name(std::move(name)), m_bc_left(left), m_bc_right(right)
{
    check_bc(m_bc_left, "left");
    check_bc(m_bc_right, "right");
}

void device::set_boundaries(boundary_condition left, boundary_condition right)
{
    check_bc(left, "left");
    check_bc(right, "right");
    m_bc_left = left;
    m_bc_right = right;
}

void device::add_region(region reg)
{
    if (!std::isfinite(reg.x_start) || !std::isfinite(reg.x_end) ||
        reg.x_end < reg.x_start) {
        throw std::invalid_argument("region " + reg.name +
                                    ": x_end must not precede x_start");
    }
    const real expected = m_regions.empty() ? 0.0 : m_regions.back().x_end;
    const real tol = 1e-12 * std::max(std::abs(expected), 1e-9);
    if (std::abs(reg.x_start - expected) > tol) {
        const char* what = reg.x_start > expected ? "leaves a gap" : "overlaps";
        throw std::invalid_argument("region " + reg.name + " " + what +
                                    ": must start at " +
                                    std::to_string(expected));
    }
    auto mat = material_library::get(reg.material_id);
    m_regions.push_back(std::move(reg));
    m_materials.push_back(std::move(mat));
}

real device::length() const
{
    return m_regions.empty() ? 0.0 : m_regions.back().x_end;
}

std::shared_ptr<const material> device::material_at(real x) const
{
    if (m_regions.empty()) {
        throw invalid_state_error("device " + m_name + " has no regions");
    }
    for (std::size_t i = 0; i < m_regions.size(); ++i) {
        if (x < m_regions[i].x_end) {
            return m_materials[i];
        }
    }
    return m_materials.back();
}

bool device::operator==(const device& other) const
{
    if (m_name != other.m_name || m_regions != other.m_regions ||
        m_bc_left != other.m_bc_left || m_bc_right != other.m_bc_right) {
        return false;
    }
    for (std::size_t i = 0; i < m_materials.size(); ++i) {
        if (!(*m_materials[i] == *other.m_materials[i])) {
            return false;
        }
    }
    return true;
}

} // namespace mblight
