#ifndef MBLIGHT_SOLVER_HPP
#define MBLIGHT_SOLVER_HPP

#include <memory>
#include <string>
#include <vector>
#include <mblight/device.hpp>
#include <mblight/registry.hpp>
#include <mblight/result.hpp>
#include <mblight/scenario.hpp>

namespace mblight {

struct solver_options
{
    /* number of worker threads, 0 selects the hardware concurrency */
    unsigned num_threads = 0;
};

/**
 * Base class of all solvers. run() is blocking and must not be called
 * concurrently on the same instance.
 */
class solver
{
public:
    virtual ~solver() = default;

    virtual std::string name() const = 0;

    /** Simulates the setup and returns one result per scenario record. */
    virtual std::vector<result> run(const device& dev, const scenario& sce) = 0;
};

using solver_registry = registry<solver, const solver_options&>;

/** Registry holding the built-in solvers. */
solver_registry& solvers();

/**
 * Resolves aliases of the form cpu-fdtd[-red]-<N>lvl-reg-cayley to the
 * registered name; other names are returned unchanged.
 */
std::string resolve_solver_name(const std::string& name);

std::unique_ptr<solver> create_solver(const std::string& name,
                                      const solver_options& opts = {});

std::vector<std::string> available_solvers();

} // namespace mblight

#endif
