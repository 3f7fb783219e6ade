#ifndef MBLIGHT_REGISTRY_HPP
#define MBLIGHT_REGISTRY_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>
#include <mblight/errors.hpp>

namespace mblight {

/**
 * Name-to-factory map used for the solver and writer registries. Lookups
 * of unknown names raise not_found_error listing the available names.
 */
template <typename Base, typename... Args>
class registry
{
public:
    using factory = std::function<std::unique_ptr<Base>(Args...)>;

    explicit registry(std::string kind) : m_kind(std::move(kind)) {}

    void add(const std::string& name, factory f)
    {
        std::lock_guard lock(m_mtx);
        if (!m_items.emplace(name, std::move(f)).second) {
            throw conflict_error(m_kind + " " + name + " already registered");
        }
    }

    bool contains(const std::string& name) const
    {
        std::lock_guard lock(m_mtx);
        return m_items.count(name) != 0;
    }

    std::unique_ptr<Base> create(const std::string& name, Args... args) const
    {
        factory f;
        {
            std::lock_guard lock(m_mtx);
            auto it = m_items.find(name);
            if (it == m_items.end()) {
                std::string msg = m_kind + " " + name + " not found, available:";
                for (const auto& [n, unused] : m_items) {
                    msg += " " + n;
                }
                throw not_found_error(msg);
            }
            f = it->second;
        }
        return f(std::forward<Args>(args)...);
    }

    std::vector<std::string> names() const
    {
        std::lock_guard lock(m_mtx);
        std::vector<std::string> out;
        for (const auto& [n, unused] : m_items) {
            out.push_back(n);
        }
        return out;
    }

private:
    std::string m_kind;
    mutable std::mutex m_mtx;
    std::map<std::string, factory> m_items;
};

} // namespace mblight

#endif
