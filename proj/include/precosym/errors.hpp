#pragma once

#include <stdexcept>
#include <string>

namespace precosym {

// Base class for all errors raised by the engine.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Division by an identically zero expression, empty fibre inversion, etc.
struct degenerate_error : error {
    explicit degenerate_error(const std::string& msg) : error(msg) {}
};

// A coordinate or symbol does not belong to the active chart/context.
struct chart_error : error {
    explicit chart_error(const std::string& msg) : error(msg) {}
};

// Lexical or syntactic problem in an expression or model file.
struct parse_error : error {
    parse_error(const std::string& msg, int line_, int column_)
        : error(msg + " (line " + std::to_string(line_) + ", column " +
                std::to_string(column_) + ")"),
          line(line_),
          column(column_) {}
    int line;
    int column;
};

// Internal consistency check failed (e.g. a pullback identity).
struct internal_error : error {
    explicit internal_error(const std::string& msg) : error(msg) {}
};

}  // namespace precosym
