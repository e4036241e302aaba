#include "precosym/parser.hpp"

#include "precosym/errors.hpp"

#include <cctype>
#include <cmath>

namespace precosym {

namespace {

struct Token {
    enum class Kind { Integer, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };
    Kind kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }
    Token next() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && is_space(text_[pos_])) bump();
        int line = line_, col = col_;
        if (pos_ >= text_.size()) {
            current_ = {Token::Kind::End, "", line, col};
            return;
        }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                num += text_[pos_], bump();
            current_ = {Token::Kind::Integer, num, line, col};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                id += text_[pos_], bump();
            current_ = {Token::Kind::Ident, id, line, col};
            return;
        }
        Token::Kind k;
        switch (c) {
            case '+': k = Token::Kind::Plus; break;
            case '-': k = Token::Kind::Minus; break;
            case '*': k = Token::Kind::Star; break;
            case '/': k = Token::Kind::Slash; break;
            case '^': k = Token::Kind::Caret; break;
            case '(': k = Token::Kind::LParen; break;
            case ')': k = Token::Kind::RParen; break;
            case ',': k = Token::Kind::Comma; break;
            default:
                throw parse_error(std::string("unexpected character '") + c + "'", line_, col_);
        }
        bump();
        current_ = {k, std::string(1, c), line, col};
    }

    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token current_{Token::Kind::End, "", 1, 1};
};

AstPtr make(AstNode::Kind kind, std::vector<AstPtr> args = {}) {
    auto n = std::make_shared<AstNode>();
    n->kind = kind;
    n->args = std::move(args);
    return n;
}

// Precedence-climbing parser.
class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    AstPtr parse() {
        AstPtr e = parse_expr(0);
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::End)
            throw parse_error("unexpected trailing input '" + t.text + "'", t.line, t.column);
        return e;
    }

private:
    static int binding_power(Token::Kind k) {
        switch (k) {
            case Token::Kind::Plus:
            case Token::Kind::Minus: return 10;
            case Token::Kind::Star:
            case Token::Kind::Slash: return 20;
            case Token::Kind::Caret: return 40;
            default: return -1;
        }
    }

    AstPtr parse_expr(int min_bp) {
        AstPtr lhs = parse_prefix();
        while (true) {
            Token::Kind k = lex_.peek().kind;
            int bp = binding_power(k);
            if (bp < 0 || bp < min_bp) break;
            lex_.next();
            // ^ is right-associative, the rest left-associative.
            int next_bp = (k == Token::Kind::Caret) ? bp : bp + 1;
            AstPtr rhs = parse_expr(next_bp);
            AstNode::Kind kind;
            switch (k) {
                case Token::Kind::Plus: kind = AstNode::Kind::Add; break;
                case Token::Kind::Minus: kind = AstNode::Kind::Sub; break;
                case Token::Kind::Star: kind = AstNode::Kind::Mul; break;
                case Token::Kind::Slash: kind = AstNode::Kind::Div; break;
                default: kind = AstNode::Kind::Pow; break;
            }
            lhs = make(kind, {lhs, rhs});
        }
        return lhs;
    }

    AstPtr parse_prefix() {
        Token t = lex_.next();
        switch (t.kind) {
            case Token::Kind::Integer: {
                auto n = std::make_shared<AstNode>();
                n->kind = AstNode::Kind::Integer;
                n->value = Int(t.text);
                return n;
            }
            case Token::Kind::Minus: {
                // Unary minus binds tighter than * but looser than ^.
                AstPtr inner = parse_expr(30);
                return make(AstNode::Kind::Neg, {inner});
            }
            case Token::Kind::LParen: {
                AstPtr e = parse_expr(0);
                expect(Token::Kind::RParen, ")");
                return e;
            }
            case Token::Kind::Ident: {
                if (lex_.peek().kind == Token::Kind::LParen) {
                    lex_.next();
                    std::vector<AstPtr> args;
                    if (lex_.peek().kind != Token::Kind::RParen) {
                        args.push_back(parse_expr(0));
                        while (lex_.peek().kind == Token::Kind::Comma) {
                            lex_.next();
                            args.push_back(parse_expr(0));
                        }
                    }
                    expect(Token::Kind::RParen, ")");
                    auto n = std::make_shared<AstNode>();
                    n->kind = AstNode::Kind::Call;
                    n->name = t.text;
                    n->args = std::move(args);
                    return n;
                }
                auto n = std::make_shared<AstNode>();
                n->kind = AstNode::Kind::Symbol;
                n->name = t.text;
                return n;
            }
            default:
                throw parse_error("unexpected token '" + t.text + "'", t.line, t.column);
        }
    }

    void expect(Token::Kind k, const std::string& what) {
        const Token& t = lex_.peek();
        if (t.kind != k) throw parse_error("expected '" + what + "'", t.line, t.column);
        lex_.next();
    }

    Lexer lex_;
};

}  // namespace

AstPtr parse_ast(const std::string& text) { return Parser(text).parse(); }

double ast_eval(const AstNode& node, const std::map<std::string, double>& env) {
    switch (node.kind) {
        case AstNode::Kind::Integer: return static_cast<double>(node.value);
        case AstNode::Kind::Symbol: {
            auto it = env.find(node.name);
            if (it == env.end()) throw chart_error("unbound symbol " + node.name);
            return it->second;
        }
        case AstNode::Kind::Call: throw chart_error("cannot evaluate opaque " + node.name);
        case AstNode::Kind::Neg: return -ast_eval(*node.args[0], env);
        case AstNode::Kind::Add: return ast_eval(*node.args[0], env) + ast_eval(*node.args[1], env);
        case AstNode::Kind::Sub: return ast_eval(*node.args[0], env) - ast_eval(*node.args[1], env);
        case AstNode::Kind::Mul: return ast_eval(*node.args[0], env) * ast_eval(*node.args[1], env);
        case AstNode::Kind::Div: return ast_eval(*node.args[0], env) / ast_eval(*node.args[1], env);
        case AstNode::Kind::Pow:
            return std::pow(ast_eval(*node.args[0], env), ast_eval(*node.args[1], env));
    }
    throw internal_error("bad AST node");
}

namespace {

Expression resolve_call(const AstNode& node, const ContextPtr& ctx) {
    // D(f, x, y, ...) builds iterated formal partials.
    if (node.name == "D") {
        if (node.args.size() < 2)
            throw parse_error("D(...) needs a function and at least one variable", 1, 1);
        const AstNode& head = *node.args[0];
        if (head.kind != AstNode::Kind::Symbol && head.kind != AstNode::Kind::Call)
            throw parse_error("first argument of D(...) must be an opaque function", 1, 1);
        auto f = ctx->find(head.name);
        if (!f || ctx->info(*f).klass != SymClass::Opaque)
            throw chart_error("undeclared opaque function: " + head.name);
        SymId cur = *f;
        for (std::size_t i = 1; i < node.args.size(); ++i) {
            const AstNode& v = *node.args[i];
            if (v.kind != AstNode::Kind::Symbol)
                throw parse_error("D(...) variables must be plain coordinates", 1, 1);
            auto c = ctx->find(v.name);
            if (!c || !ctx->is_coordinate(*c))
                throw chart_error("undeclared coordinate in D(...): " + v.name);
            cur = ctx->partial(cur, *c);
        }
        return Expression::symbol(ctx, cur);
    }
    auto f = ctx->find(node.name);
    if (!f) throw chart_error("undeclared identifier: " + node.name);
    const auto& info = ctx->info(*f);
    if (info.klass != SymClass::Opaque)
        throw chart_error("identifier is not an opaque function: " + node.name);
    if (node.args.size() != info.args.size())
        throw chart_error("wrong argument count for " + node.name);
    for (std::size_t i = 0; i < node.args.size(); ++i) {
        const AstNode& a = *node.args[i];
        if (a.kind != AstNode::Kind::Symbol || !ctx->find(a.name) ||
            *ctx->find(a.name) != info.args[i])
            throw chart_error("opaque function " + node.name +
                              " must be applied to its declared arguments");
    }
    return Expression::symbol(ctx, *f);
}

}  // namespace

Expression resolve_ast(const AstNode& node, const ContextPtr& ctx) {
    switch (node.kind) {
        case AstNode::Kind::Integer:
            return Expression::constant(ctx, Rational(node.value));
        case AstNode::Kind::Symbol: {
            auto s = ctx->find(node.name);
            if (!s) throw chart_error("undeclared identifier: " + node.name);
            return Expression::symbol(ctx, *s);
        }
        case AstNode::Kind::Call: return resolve_call(node, ctx);
        case AstNode::Kind::Neg: return -resolve_ast(*node.args[0], ctx);
        case AstNode::Kind::Add:
            return resolve_ast(*node.args[0], ctx) + resolve_ast(*node.args[1], ctx);
        case AstNode::Kind::Sub:
            return resolve_ast(*node.args[0], ctx) - resolve_ast(*node.args[1], ctx);
        case AstNode::Kind::Mul:
            return resolve_ast(*node.args[0], ctx) * resolve_ast(*node.args[1], ctx);
        case AstNode::Kind::Div:
            return resolve_ast(*node.args[0], ctx) / resolve_ast(*node.args[1], ctx);
        case AstNode::Kind::Pow: {
            Expression base = resolve_ast(*node.args[0], ctx);
            Expression ex = resolve_ast(*node.args[1], ctx);
            auto r = ex.rational_value();
            if (!r || denominator(*r) != 1)
                throw chart_error("exponents must be integer constants");
            Int n = numerator(*r);
            if (n < -1000 || n > 1000) throw chart_error("exponent out of range");
            return base.pow(static_cast<int>(n));
        }
    }
    throw internal_error("bad AST node");
}

Expression parse_expression(const std::string& text, const ContextPtr& ctx) {
    return resolve_ast(*parse_ast(text), ctx);
}

}  // namespace precosym
