#include "sprego/lang/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

#include "sprego/lang/lexer.hpp"

namespace sprego::lang {

ParseError::ParseError(std::size_t offset, std::string expected, std::string found)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + ": expected " + expected + ", found " +
                         found),
      offset_(offset),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

CellRef cell_from_lexeme(const Token& tok) {
    CellRef ref;
    std::size_t i = 0;
    const std::string& s = tok.lexeme;
    if (s[i] == '$') {
        ref.column_absolute = true;
        ++i;
    }
    while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) {
        ref.column += static_cast<char>(std::toupper(static_cast<unsigned char>(s[i])));
        ++i;
    }
    if (i < s.size() && s[i] == '$') {
        ref.row_absolute = true;
        ++i;
    }
    std::from_chars(s.data() + i, s.data() + s.size(), ref.row);
    ref.span = tok.span;
    return ref;
}

std::string unescape(std::string_view quoted) {
    std::string out;
    for (std::size_t i = 1; i + 1 < quoted.size(); ++i) {
        out += quoted[i];
        if (quoted[i] == '"') ++i;  // "" -> "
    }
    return out;
}

std::optional<BinaryOp> comparison_op(std::string_view lexeme) {
    if (lexeme == "=") return BinaryOp::Eq;
    if (lexeme == "<>") return BinaryOp::Ne;
    if (lexeme == "<") return BinaryOp::Lt;
    if (lexeme == "<=") return BinaryOp::Le;
    if (lexeme == ">") return BinaryOp::Gt;
    if (lexeme == ">=") return BinaryOp::Ge;
    return std::nullopt;
}

class Parser {
public:
    Parser(std::string_view source, std::vector<Token> tokens) : src_(source), toks_(std::move(tokens)) {}

    Formula formula() {
        Formula out;
        if (at_punct("{")) {
            ++pos_;
            expect_operator("=");
            out.array_entered = true;
            out.body = expression();
            expect_punct("}");
        } else {
            if (at_operator("=")) ++pos_;
            out.body = expression();
        }
        expect_end();
        return out;
    }

    Expr bare() {
        Expr e = expression();
        expect_end();
        return e;
    }

private:
    const Token* peek() const { return pos_ < toks_.size() ? &toks_[pos_] : nullptr; }

    bool at(TokenKind kind, std::string_view lexeme) const {
        const Token* t = peek();
        return t != nullptr && t->kind == kind && t->lexeme == lexeme;
    }
    bool at_punct(std::string_view p) const { return at(TokenKind::Punctuation, p); }
    bool at_operator(std::string_view p) const { return at(TokenKind::Operator, p); }

    std::size_t offset() const { return pos_ < toks_.size() ? toks_[pos_].span.start : src_.size(); }
    std::size_t prev_end() const { return pos_ > 0 ? toks_[pos_ - 1].span.end : 0; }

    std::string found() const {
        const Token* t = peek();
        if (t == nullptr) return "end of input";
        return std::string(to_string(t->kind)) + " '" + t->lexeme + "'";
    }

    [[noreturn]] void fail(std::string expected) const { throw ParseError(offset(), std::move(expected), found()); }

    void expect_punct(std::string_view p) {
        if (!at_punct(p)) fail("'" + std::string(p) + "'");
        ++pos_;
    }
    void expect_operator(std::string_view p) {
        if (!at_operator(p)) fail("'" + std::string(p) + "'");
        ++pos_;
    }
    void expect_end() const {
        if (peek() != nullptr) fail("operator or end of input");
    }

    Expr make_binary(BinaryOp op, Expr lhs, Expr rhs) {
        Span span{lhs.span().start, rhs.span().end};
        return Expr(Binary{op, std::move(lhs), std::move(rhs)}, span);
    }

    Expr expression() { return comparison(); }

    Expr comparison() {
        Expr lhs = concat();
        while (const Token* t = peek()) {
            if (t->kind != TokenKind::Operator) break;
            auto op = comparison_op(t->lexeme);
            if (!op) break;
            ++pos_;
            lhs = make_binary(*op, std::move(lhs), concat());
        }
        return lhs;
    }

    Expr concat() {
        Expr lhs = additive();
        while (at_operator("&")) {
            ++pos_;
            lhs = make_binary(BinaryOp::Concat, std::move(lhs), additive());
        }
        return lhs;
    }

    Expr additive() {
        Expr lhs = multiplicative();
        while (at_operator("+") || at_operator("-")) {
            BinaryOp op = peek()->lexeme == "+" ? BinaryOp::Add : BinaryOp::Sub;
            ++pos_;
            lhs = make_binary(op, std::move(lhs), multiplicative());
        }
        return lhs;
    }

    Expr multiplicative() {
        Expr lhs = power();
        while (at_operator("*") || at_operator("/")) {
            BinaryOp op = peek()->lexeme == "*" ? BinaryOp::Mul : BinaryOp::Div;
            ++pos_;
            lhs = make_binary(op, std::move(lhs), power());
        }
        return lhs;
    }

    Expr power() {
        Expr lhs = postfix();
        while (at_operator("^")) {
            ++pos_;
            lhs = make_binary(BinaryOp::Pow, std::move(lhs), postfix());
        }
        return lhs;
    }

    Expr postfix() {
        Expr operand = prefix();
        while (at_operator("%")) {
            Span span{operand.span().start, toks_[pos_].span.end};
            ++pos_;
            operand = Expr(Unary{UnaryOp::Percent, std::move(operand)}, span);
        }
        return operand;
    }

    Expr prefix() {
        if (at_operator("-") || at_operator("+")) {
            const std::size_t start = toks_[pos_].span.start;
            UnaryOp op = toks_[pos_].lexeme == "-" ? UnaryOp::Negate : UnaryOp::Plus;
            ++pos_;
            Expr operand = prefix();
            Span span{start, operand.span().end};
            return Expr(Unary{op, std::move(operand)}, span);
        }
        return primary();
    }

    Expr primary() {
        const Token* t = peek();
        if (t == nullptr) fail("operand");
        const Span span = t->span;
        switch (t->kind) {
            case TokenKind::Number: {
                double v = 0.0;
                auto [ptr, ec] = std::from_chars(t->lexeme.data(), t->lexeme.data() + t->lexeme.size(), v);
                if (ec != std::errc{} || !std::isfinite(v)) fail("finite number");
                ++pos_;
                return Expr(NumberLit{v}, span);
            }
            case TokenKind::String:
                ++pos_;
                return Expr(TextLit{unescape(t->lexeme)}, span);
            case TokenKind::Boolean: {
                const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(t->lexeme[0])));
                ++pos_;
                return Expr(BoolLit{c == 'T'}, span);
            }
            case TokenKind::CellRef: {
                CellRef start = cell_from_lexeme(*t);
                ++pos_;
                if (!at_operator(":")) return Expr(std::move(start), span);
                ++pos_;
                const Token* e = peek();
                if (e == nullptr || e->kind != TokenKind::CellRef) fail("cell reference after ':'");
                CellRef end = cell_from_lexeme(*e);
                ++pos_;
                return Expr(normalize(RangeRef{std::move(start), std::move(end)}), Span{span.start, prev_end()});
            }
            case TokenKind::Identifier: {
                std::string ident = t->lexeme;
                ++pos_;
                if (!at_punct("(")) return Expr(NameRef{std::move(ident)}, span);
                ++pos_;
                Call c;
                for (char ch : ident) c.name += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
                c.name_span = span;
                if (!at_punct(")")) {
                    c.args.push_back(expression());
                    while (at_punct(",")) {
                        ++pos_;
                        c.args.push_back(expression());
                    }
                }
                expect_punct(")");
                return Expr(std::move(c), Span{span.start, prev_end()});
            }
            case TokenKind::Punctuation:
                if (t->lexeme == "(") {
                    ++pos_;
                    Expr inner = expression();
                    expect_punct(")");
                    return Expr(std::move(inner.node()), Span{span.start, prev_end()});
                }
                break;
            case TokenKind::Operator:
                break;
        }
        fail("operand");
    }

    std::string_view src_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// Binding strength used to decide where the formatter needs parentheses.
constexpr int kAtom = 8;
constexpr int kPrefix = 7;
constexpr int kPostfix = 6;

int binary_precedence(BinaryOp op) {
    switch (op) {
        case BinaryOp::Pow: return 5;
        case BinaryOp::Mul: case BinaryOp::Div: return 4;
        case BinaryOp::Add: case BinaryOp::Sub: return 3;
        case BinaryOp::Concat: return 2;
        default: return 1;
    }
}

int precedence(const Expr& e) {
    return std::visit(Overloaded{
                          [](const Binary& b) { return binary_precedence(b.op); },
                          [](const Unary& u) { return u.op == UnaryOp::Percent ? kPostfix : kPrefix; },
                          [](const NumberLit& n) { return n.value < 0 || std::signbit(n.value) ? kPrefix : kAtom; },
                          [](const auto&) { return kAtom; },
                      },
                      e.node());
}

void emit(const Expr& e, std::string& out);

void emit_child(const Expr& e, bool parens, std::string& out) {
    if (parens) out += '(';
    emit(e, out);
    if (parens) out += ')';
}

void emit_cell(const CellRef& c, std::string& out) {
    if (c.column_absolute) out += '$';
    out += c.column;
    if (c.row_absolute) out += '$';
    out += std::to_string(c.row);
}

void emit(const Expr& e, std::string& out) {
    std::visit(Overloaded{
                   [&](const NumberLit& n) { out += format_number(n.value); },
                   [&](const TextLit& t) {
                       out += '"';
                       for (char c : t.value) {
                           if (c == '"') out += '"';
                           out += c;
                       }
                       out += '"';
                   },
                   [&](const BoolLit& b) { out += b.value ? "TRUE" : "FALSE"; },
                   [&](const CellRef& c) { emit_cell(c, out); },
                   [&](const RangeRef& r) {
                       emit_cell(r.start, out);
                       out += ':';
                       emit_cell(r.end, out);
                   },
                   [&](const NameRef& n) { out += n.name; },
                   [&](const Unary& u) {
                       if (u.op == UnaryOp::Percent) {
                           emit_child(*u.operand, precedence(*u.operand) < kPostfix, out);
                           out += '%';
                       } else {
                           out += to_string(u.op);
                           emit_child(*u.operand, precedence(*u.operand) < kPrefix, out);
                       }
                   },
                   [&](const Binary& b) {
                       const int p = binary_precedence(b.op);
                       emit_child(*b.lhs, precedence(*b.lhs) < p, out);
                       out += to_string(b.op);
                       emit_child(*b.rhs, precedence(*b.rhs) <= p, out);
                   },
                   [&](const Call& c) {
                       out += c.name;
                       out += '(';
                       for (std::size_t i = 0; i < c.args.size(); ++i) {
                           if (i > 0) out += ',';
                           emit(c.args[i], out);
                       }
                       out += ')';
                   },
               },
               e.node());
}

}  // namespace

Formula parse(std::string_view source) { return Parser(source, tokenize(source)).formula(); }

Expr parse_expression(std::string_view source) { return Parser(source, tokenize(source)).bare(); }

std::string format_number(double value) {
    if (value == 0.0) return "0";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string format(const Expr& expr) {
    std::string out;
    emit(expr, out);
    return out;
}

std::string format(const Formula& formula) {
    std::string body = format(formula.body);
    return formula.array_entered ? "{=" + body + "}" : "=" + body;
}

}  // namespace sprego::lang
