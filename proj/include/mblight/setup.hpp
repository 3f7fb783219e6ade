#ifndef MBLIGHT_SETUP_HPP
#define MBLIGHT_SETUP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>
#include <mblight/device.hpp>
#include <mblight/scenario.hpp>

namespace mblight {

struct setup
{
    device dev;
    scenario sce;
};

/** Optional changes applied to a setup before it is run. */
struct setup_overrides
{
    std::optional<unsigned> gridpoints;
    std::optional<real> end_time;
    /* device length, for setups consisting of a single region */
    std::optional<real> length;
    /* seed of every random initial field */
    std::optional<std::uint64_t> seed;
};

/** Names of the built-in setups (marskar2011 also as marskar2011-<N>lvl). */
std::vector<std::string> builtin_setups();

/**
 * Creates a built-in setup: ziolkowski1995, song2005, marskar2011[-<N>lvl]
 * (N >= 2, default 6) or tzenov2016. Materials are added to the library.
 * Throws not_found_error for unknown names.
 */
setup builtin_setup(const std::string& name, const setup_overrides& ovr = {});

/** Applies overrides to an existing setup. */
void apply_overrides(setup& s, const setup_overrides& ovr);

/**
 * Energies of the anharmonic ladder E_1 = 0,
 * E_{n+1} = E_n + hbar w0 [1 - 0.1 (n - 3)], in units of hbar w0.
 */
std::vector<real> marskar_ladder(unsigned levels);

/**
 * Reads a setup from a JSON document (schema 1). Structural problems are
 * reported as validation_error entries prefixed with the JSON pointer of
 * the offending value; the result is checked with scenario_validate.
 */
setup parse_setup(const std::string& json_text);

setup parse_setup_file(const std::string& path);

} // namespace mblight

#endif
