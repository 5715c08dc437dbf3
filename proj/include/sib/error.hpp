#ifndef SIB_ERROR_HPP
#define SIB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sib {

// Bad input: malformed files, out-of-range arguments, violated preconditions.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Parse failure with source position.
class ParseError : public InputError {
public:
    ParseError(int line_, int column_, const std::string& what)
        : InputError("line " + std::to_string(line_) + ", column " + std::to_string(column_) + ": " + what),
          line(line_),
          column(column_)
    {
    }

    int line;
    int column;
};

// A search exceeded its time guard. Raised explicitly, never reported as a "no".
class TimeGuardError : public std::runtime_error {
public:
    explicit TimeGuardError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sib

#endif
