#ifndef MBLIGHT_MATERIAL_HPP
#define MBLIGHT_MATERIAL_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>
#include <mblight/quantum.hpp>
#include <mblight/types.hpp>

namespace mblight {

/**
 * Electromagnetic properties of a region, optionally with a quantum
 * mechanical description of an active medium.
 *
 * The linear loss term alpha_0 relates to the conductivity by
 * sigma = 2 alpha_0 eps c with c = (mu eps)^(-1/2).
 */
class material
{
public:
    explicit material(std::string id,
                      std::optional<qm_description> qm = std::nullopt,
                      real rel_permittivity = 1.0, real overlap_factor = 1.0,
                      real losses = 0.0, real rel_permeability = 1.0);

    const std::string& id() const { return m_id; }

    const std::optional<qm_description>& qm() const { return m_qm; }

    real rel_permittivity() const { return m_rel_permittivity; }
    real rel_permeability() const { return m_rel_permeability; }
    real overlap_factor() const { return m_overlap_factor; }
    real losses() const { return m_losses; }

    real permittivity() const { return EPS0 * m_rel_permittivity; }
    real permeability() const { return MU0 * m_rel_permeability; }
    real light_speed() const;
    /** Wave impedance sqrt(mu / eps). */
    real impedance() const;
    real conductivity() const;

    static real losses_from_conductivity(real sigma, real rel_permittivity,
                                         real rel_permeability = 1.0);

    bool operator==(const material&) const = default;

private:
    std::string m_id;
    std::optional<qm_description> m_qm;
    real m_rel_permittivity;
    real m_overlap_factor;
    real m_losses;
    real m_rel_permeability;
};

/**
 * Process-wide collection of materials. Regions refer to materials by id,
 * so a material must be registered before a region can use it. Insertion
 * and lookup are synchronized.
 */
class material_library
{
public:
    /** Throws conflict_error if the id is taken. */
    static void add(material mat);

    /**
     * Adds the material, or accepts it silently if an identical material
     * with the same id is already present. Throws conflict_error if the id
     * is taken by a different material.
     */
    static void ensure(const material& mat);

    /** Throws not_found_error for unknown ids. */
    static std::shared_ptr<const material> get(const std::string& id);

    static bool contains(const std::string& id);

    static std::vector<std::string> ids();
};

inline void material_library_add(material mat)
{
    material_library::add(std::move(mat));
}

} // namespace mblight

#endif
