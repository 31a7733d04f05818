#pragma once

#include <stdexcept>
#include <string>

namespace giant_lattice {

// Raised when a numerical routine cannot deliver a trustworthy result
// (failed eigensolve, integrator norm drift beyond its limit, ...).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent run configuration. `line` is 0 when the problem is
// not tied to a particular line of the document.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& what, int line = 0)
        : std::runtime_error(format(field, what, line)), field_(field), line_(line) {}

    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    static std::string format(const std::string& field, const std::string& what, int line) {
        std::string s;
        if (line > 0) s += "line " + std::to_string(line) + ": ";
        if (!field.empty()) s += field + ": ";
        return s + what;
    }

    std::string field_;
    int line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace giant_lattice
