#pragma once

#include <stdexcept>
#include <string>

namespace antsched {

/// Invalid configuration value or violated type invariant.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Malformed textual input (CSV, key=value config, m3u8).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what)
        , line_(line) {}
    explicit ParseError(const std::string& what) : ParseError(what, 0) {}

    /// 1-based line number, 0 when unknown.
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Inputs that parse individually but do not fit together
/// (e.g. a schedule shorter than the playlist it drives).
class ConsistencyError : public std::runtime_error {
public:
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace antsched
