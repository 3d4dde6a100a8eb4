#ifndef TSGC_ERRORS_HPP
#define TSGC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tsgc {

// Bad config file or config key: maps to CLI exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tsgc

#endif
