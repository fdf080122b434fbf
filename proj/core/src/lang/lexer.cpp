#include "sprego/lang/lexer.hpp"

#include <cctype>
#include <charconv>

namespace sprego::lang {

namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_word(char c) { return is_alpha(c) || is_digit(c) || c == '_'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string describe(std::string_view source, std::size_t pos) {
    if (pos >= source.size()) return "end of input";
    auto c = static_cast<unsigned char>(source[pos]);
    if (c < 0x20 || c >= 0x7f) return "byte 0x" + std::string{"0123456789abcdef"[c >> 4]} + "0123456789abcdef"[c & 15];
    return std::string("'") + source[pos] + "'";
}

class Lexer {
public:
    explicit Lexer(std::string_view source) : src_(source) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
            if (pos_ >= src_.size()) break;
            out.push_back(next());
        }
        return out;
    }

private:
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    Token make(TokenKind kind, std::size_t start) {
        return Token{kind, std::string(src_.substr(start, pos_ - start)), Span{start, pos_}};
    }

    Token next() {
        const std::size_t start = pos_;
        const char c = src_[pos_];
        if (is_digit(c) || (c == '.' && is_digit(peek(1)))) return number();
        if (c == '"') return string();
        if (c == '$' || is_alpha(c) || c == '_') return word();

        switch (c) {
            case '<':
                ++pos_;
                if (peek() == '=' || peek() == '>') ++pos_;
                return make(TokenKind::Operator, start);
            case '>':
                ++pos_;
                if (peek() == '=') ++pos_;
                return make(TokenKind::Operator, start);
            case '+': case '-': case '*': case '/': case '^': case '&': case '%': case '=': case ':':
                ++pos_;
                return make(TokenKind::Operator, start);
            case '(': case ')': case ',': case '{': case '}':
                ++pos_;
                return make(TokenKind::Punctuation, start);
            default:
                throw LexError(start, "unexpected " + describe(src_, start));
        }
    }

    Token number() {
        const std::size_t start = pos_;
        while (is_digit(peek())) ++pos_;
        if (peek() == '.') {
            ++pos_;
            while (is_digit(peek())) ++pos_;
        }
        if (peek() == 'e' || peek() == 'E') {
            std::size_t save = pos_;
            ++pos_;
            if (peek() == '+' || peek() == '-') ++pos_;
            if (!is_digit(peek())) throw LexError(save, "malformed number: exponent has no digits");
            while (is_digit(peek())) ++pos_;
        }
        if (peek() == '.') throw LexError(pos_, "malformed number: unexpected '.'");
        return make(TokenKind::Number, start);
    }

    Token string() {
        const std::size_t start = pos_;
        ++pos_;
        while (true) {
            if (pos_ >= src_.size()) throw LexError(start, "unterminated string literal");
            if (src_[pos_] == '"') {
                if (peek(1) == '"') {
                    pos_ += 2;
                    continue;
                }
                ++pos_;
                return make(TokenKind::String, start);
            }
            ++pos_;
        }
    }

    /// Length of a cell reference starting at pos_, or 0 when the text there
    /// is not `[$]?[A-Za-z]{1,3}[$]?[1-9][0-9]*` followed by a word boundary.
    std::size_t cell_ref_length(bool& has_dollar) const {
        std::size_t p = pos_;
        has_dollar = false;
        if (p < src_.size() && src_[p] == '$') {
            has_dollar = true;
            ++p;
        }
        std::size_t letters = 0;
        while (p < src_.size() && is_alpha(src_[p])) ++p, ++letters;
        if (letters == 0 || letters > kMaxColumnLetters) return 0;
        if (p < src_.size() && src_[p] == '$') {
            has_dollar = true;
            ++p;
        }
        if (p >= src_.size() || src_[p] < '1' || src_[p] > '9') return 0;
        const std::size_t digits_start = p;
        while (p < src_.size() && is_digit(src_[p])) ++p;
        if (p < src_.size() && is_word(src_[p])) return 0;
        std::uint64_t row = 0;
        auto [ptr, ec] = std::from_chars(src_.data() + digits_start, src_.data() + p, row);
        if (ec != std::errc{} || row > kMaxRow) return 0;
        return p - pos_;
    }

    bool call_follows(std::size_t p) const {
        while (p < src_.size() && is_space(src_[p])) ++p;
        return p < src_.size() && src_[p] == '(';
    }

    Token word() {
        const std::size_t start = pos_;
        bool has_dollar = false;
        if (std::size_t len = cell_ref_length(has_dollar); len > 0) {
            // A plain word such as LOG10 followed by '(' is a function name.
            if (has_dollar || !call_follows(pos_ + len)) {
                pos_ += len;
                return make(TokenKind::CellRef, start);
            }
        }
        if (src_[pos_] == '$') throw LexError(start, "malformed absolute reference");
        while (is_word(peek())) ++pos_;
        // `A$` or `$` in the middle of a word never forms a valid reference.
        if (peek() == '$') throw LexError(pos_, "malformed absolute reference");
        Token tok = make(TokenKind::Identifier, start);
        if (!call_follows(pos_)) {
            std::string upper;
            for (char ch : tok.lexeme) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            if (upper == "TRUE" || upper == "FALSE") tok.kind = TokenKind::Boolean;
        }
        return tok;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace

LexError::LexError(std::size_t offset, const std::string& message)
    : std::runtime_error("lex error at offset " + std::to_string(offset) + ": " + message), offset_(offset) {}

const char* to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::Number: return "number";
        case TokenKind::String: return "string";
        case TokenKind::Identifier: return "identifier";
        case TokenKind::CellRef: return "cell-ref";
        case TokenKind::Operator: return "operator";
        case TokenKind::Punctuation: return "punctuation";
        case TokenKind::Boolean: return "boolean";
    }
    return "?";
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace sprego::lang
