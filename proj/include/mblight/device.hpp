#ifndef MBLIGHT_DEVICE_HPP
#define MBLIGHT_DEVICE_HPP

#include <memory>
#include <string>
#include <variant>
#include <vector>
#include <mblight/material.hpp>

namespace mblight {

/** Field boundary with reflectivity R in [0, 1] (power reflection). */
struct bc_reflectivity
{
    real reflectivity = 1.0;

    bool operator==(const bc_reflectivity&) const = default;
};

/* further boundary kinds (e.g. periodic) extend this variant */
using boundary_condition = std::variant<bc_reflectivity>;

real reflectivity_of(const boundary_condition& bc);

/** Section [x_start, x_end] of a device with constant material. */
struct region
{
    std::string name;
    std::string material_id;
    real x_start = 0.0;
    real x_end = 0.0;

    bool operator==(const region&) const = default;
};

/**
 * Static part of a setup: a contiguous chain of regions starting at x = 0
 * and the field boundary conditions at both ends.
 */
class device
{
public:
    explicit device(std::string name,
                    boundary_condition left = bc_reflectivity{ 1.0 },
                    boundary_condition right = bc_reflectivity{ 1.0 });

    /**
     * Appends a region. Throws std::invalid_argument if it does not adjoin
     * the current end of the device (the first region must start at 0) and
     * not_found_error if the material is not in the library.
     */
    void add_region(region reg);

    const std::string& name() const { return m_name; }

    const std::vector<region>& regions() const { return m_regions; }

    /** Device length, 0 for an empty device. */
    real length() const;

    const boundary_condition& bc_left() const { return m_bc_left; }
    const boundary_condition& bc_right() const { return m_bc_right; }

    void set_boundaries(boundary_condition left, boundary_condition right);

    /** Material of the region at position x (half-open regions, the last
     *  region is closed). */
    std::shared_ptr<const material> material_at(real x) const;

    std::shared_ptr<const material> material_of(std::size_t region_idx) const
    {
        return m_materials.at(region_idx);
    }

    /** Deep comparison including the referenced materials. */
    bool operator==(const device& other) const;

private:
    std::string m_name;
    std::vector<region> m_regions;
    std::vector<std::shared_ptr<const material>> m_materials;
    boundary_condition m_bc_left;
    boundary_condition m_bc_right;
};

inline void device_add_region(device& dev, region reg)
{
    dev.add_region(std::move(reg));
}

} // namespace mblight

#endif
