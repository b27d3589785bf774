#ifndef SPLITSPEC_ERRORS_HPP
#define SPLITSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace splitspec {

// Base class for everything this library throws on purpose.
struct SimError : std::runtime_error {
    explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

// Expression text could not be parsed; offset is a byte position into the input.
struct ExprParseError : SimError {
    ExprParseError(const std::string& msg, std::size_t offset)
        : SimError(msg + " (at offset " + std::to_string(offset) + ")"), offset(offset) {}
    std::size_t offset;
};

// Expression evaluated to something non-finite (division by zero etc.).
struct EvalError : SimError {
    explicit EvalError(const std::string& msg) : SimError(msg) {}
};

// Config file rejected; line is 1-based.
struct ConfigError : SimError {
    ConfigError(const std::string& msg, int line)
        : SimError("line " + std::to_string(line) + ": " + msg), line(line) {}
    explicit ConfigError(const std::string& msg) : SimError(msg), line(0) {}
    int line;
};

// A scenario was well-formed but failed while running.
struct ScenarioError : SimError {
    explicit ScenarioError(const std::string& msg) : SimError(msg) {}
};

}  // namespace splitspec

#endif
