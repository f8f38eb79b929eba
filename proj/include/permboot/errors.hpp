#pragma once

#include <stdexcept>
#include <string>

namespace permboot {

/// Input data is malformed (non-finite samples, out-of-range parameters).
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Series is too short for the requested embedding or statistic.
class insufficient_data : public invalid_input {
public:
    using invalid_input::invalid_input;
};

/// Inconsistent inference configuration (B, significance, memory caps).
class config_error : public invalid_input {
public:
    using invalid_input::invalid_input;
};

/// A file could not be opened, read or written.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Text content could not be parsed. Carries the 1-based line of the failure.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t line)
        : std::runtime_error(what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Regression on degenerate data.
class fit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal consistency check failed. Indicates a bug, not bad input.
class invariant_violation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline void check_invariant(bool condition, const char* what) {
    if (!condition) throw invariant_violation(what);
}

}  // namespace permboot
