#include <regex>
#include <mblight/fdtd.hpp>
#include <mblight/solver.hpp>

namespace mblight {

solver_registry& solvers()
{
    static solver_registry reg("solver");
    static const bool registered = [] {
        reg.add("fdtd-reg-cayley", [](const solver_options& opts) {
            return std::make_unique<fdtd_solver>(stepper_kind::splitting,
                                                 opts);
        });
        reg.add("fdtd-rk4", [](const solver_options& opts) {
            return std::make_unique<fdtd_solver>(stepper_kind::rk4, opts);
        });
        return true;
    }();
    (void)registered;
    return reg;
}

std::string resolve_solver_name(const std::string& name)
{
    static const std::regex alias("cpu-fdtd(-red)?-[0-9]+lvl-reg-cayley");
    if (std::regex_match(name, alias)) {
        return "fdtd-reg-cayley";
    }
    return name;
}

std::unique_ptr<solver> create_solver(const std::string& name,
                                      const solver_options& opts)
{
    return solvers().create(resolve_solver_name(name), opts);
}

std::vector<std::string> available_solvers()
{
    return solvers().names();
}

} // namespace mblight
