#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kbh {

// Mismatched dimensions, wrong bidegrees, out-of-range generator indices.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A well-formed request the mathematics refuses (non-Poisson bivector,
// blow-up centre without the ddbar-lemma flag, ...).
class DomainRefusal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Broken internal invariant; never a data answer.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace kbh
