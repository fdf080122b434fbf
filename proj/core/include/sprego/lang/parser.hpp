#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "sprego/lang/ast.hpp"

namespace sprego::lang {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::string expected, std::string found);

    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }
    const std::string& found() const { return found_; }

private:
    std::size_t offset_;
    std::string expected_;
    std::string found_;
};

/// Parses a formula. Accepts `=expr`, `{=expr}` (array-entered) or a bare
/// expression. Lexical problems surface as LexError, grammar problems as ParseError.
///
/// Precedence, tightest first: `:`, unary `-`/`+`, postfix `%`, `^`, `*` `/`,
/// `+` `-`, `&`, comparisons. All binary operators are left-associative.
Formula parse(std::string_view source);

/// Parses a bare expression; a leading `=` or braces are rejected.
Expr parse_expression(std::string_view source);

/// Canonical text: uppercase function names and cell references, no
/// whitespace, minimal parentheses, `{=...}` iff array-entered.
std::string format(const Formula& formula);
std::string format(const Expr& expr);

/// Shortest text that reads back to exactly `value`.
std::string format_number(double value);

}  // namespace sprego::lang
