#ifndef COHERE_ERROR_HPP
#define COHERE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cohere {

// Precondition violation on a library call (empty pattern, N_g = 0, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed text input. line() is 1-based; 0 when no line applies.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace cohere

#endif // COHERE_ERROR_HPP
