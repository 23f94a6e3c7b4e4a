#pragma once

#include <stdexcept>
#include <string>

namespace cotypelab {

/// Refusal of an operation whose stated precondition does not hold.
/// The message names the module and the violated precondition.
class PreconditionError : public std::runtime_error {
public:
    PreconditionError(const std::string& module, const std::string& what)
        : std::runtime_error(module + ": precondition violated: " + what), module_(module) {}
    const std::string& module() const { return module_; }

private:
    std::string module_;
};

/// Refusal because an exhaustive computation would exceed the caller's budget.
class BudgetError : public PreconditionError {
public:
    BudgetError(const std::string& module, const std::string& what)
        : PreconditionError(module, what) {}
};

/// An internal invariant failed; indicates a bug, not bad input.
class InvariantViolation : public std::logic_error {
public:
    InvariantViolation(const std::string& invariant, const std::string& detail)
        : std::logic_error("invariant violated [" + invariant + "]: " + detail),
          invariant_(invariant) {}
    const std::string& invariant() const { return invariant_; }

private:
    std::string invariant_;
};

/// Malformed JSON input; carries the byte offset reported by the parser.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t byte, const std::string& what)
        : std::runtime_error("parse error at byte " + std::to_string(byte) + ": " + what),
          byte_(byte) {}
    std::size_t byte() const { return byte_; }

private:
    std::size_t byte_;
};

/// Well-formed JSON that does not match the expected schema; carries the field path.
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& path, const std::string& what)
        : std::runtime_error("schema violation at '" + path + "': " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// Filesystem-level failure (missing file, unwritable output).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cotypelab
