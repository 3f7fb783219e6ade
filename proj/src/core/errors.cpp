#include <mblight/errors.hpp>

namespace mblight {

namespace {

std::string join_issues(const std::vector<std::string>& issues)
{
    std::string out = "invalid setup";
    for (const auto& s : issues) {
        out += "\n  - " + s;
    }
    return out;
}

} // namespace

validation_error::validation_error(std::vector<std::string> issues)
  : std::invalid_argument(join_issues(issues)), m_issues(std::move(issues))
{
}

} // namespace mblight
