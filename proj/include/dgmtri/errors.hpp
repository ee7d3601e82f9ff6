#ifndef DGMTRI_ERRORS_HPP
#define DGMTRI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dgmtri {

// Bad caller input: unknown node ids, malformed arguments, etc.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Structurally invalid model or request: cycles, inadmissible lengths,
// boundaries that do not separate.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parse failures carry a line number (1-based, 0 = unknown).
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

} // namespace dgmtri

#endif
