#ifndef MBLIGHT_ERRORS_HPP
#define MBLIGHT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace mblight {

/* invalid-argument errors are reported as std::invalid_argument */

class not_found_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class conflict_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class invalid_state_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class corrupt_archive_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/**
 * Aggregated report of a failed setup validation. what() joins all issues.
 */
class validation_error : public std::invalid_argument
{
public:
    explicit validation_error(std::vector<std::string> issues);

    const std::vector<std::string>& issues() const { return m_issues; }

private:
    std::vector<std::string> m_issues;
};

} // namespace mblight

#endif
