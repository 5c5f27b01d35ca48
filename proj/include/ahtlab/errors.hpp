#pragma once

#include <stdexcept>
#include <string>

namespace ahtlab {

// Raised when a construction would need integers at or beyond the bit budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised by the expression evaluator: division or mod by zero, lam/mu of a
// non-positive value, pop of a negative value.
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised by text parsers (coloring DSL, table/word files, certificates).
// Positions are 1-based; col == 0 means "whole line".
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int col = 0)
        : std::runtime_error(msg + " at line " + std::to_string(line) +
                             (col > 0 ? ", col " + std::to_string(col) : std::string())),
          line_(line),
          col_(col) {}

    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

} // namespace ahtlab
