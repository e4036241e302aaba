#pragma once

#include "precosym/expr.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace precosym {

// Surface syntax tree. Kept separate from the canonical kernel so that the
// unnormalised reading of an input can be evaluated numerically on its own.
struct AstNode {
    enum class Kind { Integer, Symbol, Call, Neg, Add, Sub, Mul, Div, Pow };
    Kind kind;
    Int value = 0;            // Integer
    std::string name;         // Symbol, Call
    std::vector<std::shared_ptr<const AstNode>> args;  // operands / call arguments
};
using AstPtr = std::shared_ptr<const AstNode>;

// Parses the documented grammar: identifiers, integer literals, + - * / ^
// with standard precedence (^ binds tightest and associates right),
// parentheses, and applications f(a, b).
AstPtr parse_ast(const std::string& text);

double ast_eval(const AstNode& node, const std::map<std::string, double>& env);

// Resolves an AST over the declared symbols of a context. Opaque functions
// may appear bare or applied to exactly their declared arguments;
// D(f, x, ...) denotes iterated formal partials. Exponents must resolve to
// integer constants.
Expression resolve_ast(const AstNode& node, const ContextPtr& ctx);

Expression parse_expression(const std::string& text, const ContextPtr& ctx);

}  // namespace precosym
