#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sprego/lang/ast.hpp"

namespace sprego::lang {

enum class TokenKind { Number, String, Identifier, CellRef, Operator, Punctuation, Boolean };

const char* to_string(TokenKind kind);

struct Token {
    TokenKind kind;
    std::string lexeme;  // exact source text covered by span
    Span span;
};

class LexError : public std::runtime_error {
public:
    LexError(std::size_t offset, const std::string& message);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Splits formula source into tokens. Whitespace between tokens is dropped.
std::vector<Token> tokenize(std::string_view source);

/// Maximum number of column letters accepted in a cell reference (XFD is the
/// last column of common desktop spreadsheets). Longer words lex as identifiers.
inline constexpr std::size_t kMaxColumnLetters = 3;
inline constexpr std::uint32_t kMaxRow = 1048576;

}  // namespace sprego::lang
