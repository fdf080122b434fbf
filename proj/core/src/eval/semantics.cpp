#include "sprego/eval/semantics.hpp"

#include <algorithm>

namespace sprego::eval {

using data::ValueType;

Value to_number(const Value& v) {
    switch (v.type()) {
        case ValueType::Number:
        case ValueType::Error:
            return v;
        case ValueType::Blank:
            return 0.0;
        case ValueType::Logical:
            return v.logical() ? 1.0 : 0.0;
        case ValueType::Text:
            if (auto n = data::parse_numeral(v.text())) return *n;
            return ErrorKind::Value;
    }
    return ErrorKind::Value;
}

Value to_text(const Value& v) {
    if (v.is_error() || v.is_text()) return v;
    return data::to_display(v);
}

Value to_logical(const Value& v) {
    switch (v.type()) {
        case ValueType::Logical:
        case ValueType::Error:
            return v;
        case ValueType::Blank:
            return false;
        case ValueType::Number:
            return v.number() != 0.0;
        case ValueType::Text:
            return ErrorKind::Value;
    }
    return ErrorKind::Value;
}

std::string fold_case(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; });
    return out;
}

namespace {

int rank(ValueType t) {
    switch (t) {
        case ValueType::Number: return 0;
        case ValueType::Text: return 1;
        case ValueType::Logical: return 2;
        default: return 3;
    }
}

Value empty_like(const Value& other) {
    switch (other.type()) {
        case ValueType::Text: return std::string();
        case ValueType::Logical: return false;
        default: return 0.0;
    }
}

template <typename T>
int three_way(const T& a, const T& b) {
    return a < b ? -1 : (b < a ? 1 : 0);
}

}  // namespace

int compare(const Value& a_in, const Value& b_in) {
    if (a_in.is_blank() && b_in.is_blank()) return 0;
    const Value a = a_in.is_blank() ? empty_like(b_in) : a_in;
    const Value b = b_in.is_blank() ? empty_like(a_in) : b_in;
    if (a.type() != b.type()) return three_way(rank(a.type()), rank(b.type()));
    switch (a.type()) {
        case ValueType::Number: return three_way(a.number(), b.number());
        case ValueType::Text: return three_way(fold_case(a.text()), fold_case(b.text()));
        case ValueType::Logical: return three_way(a.logical(), b.logical());
        default: return 0;
    }
}

Value compare_op(lang::BinaryOp op, const Value& a, const Value& b) {
    if (a.is_error()) return a;
    if (b.is_error()) return b;
    const int c = compare(a, b);
    switch (op) {
        case lang::BinaryOp::Eq: return c == 0;
        case lang::BinaryOp::Ne: return c != 0;
        case lang::BinaryOp::Lt: return c < 0;
        case lang::BinaryOp::Le: return c <= 0;
        case lang::BinaryOp::Gt: return c > 0;
        case lang::BinaryOp::Ge: return c >= 0;
        default: return ErrorKind::Value;
    }
}

bool exact_equal(const Value& a, const Value& b) {
    if (a.type() != b.type()) return false;
    switch (a.type()) {
        case ValueType::Number: return a.number() == b.number();
        case ValueType::Text: return fold_case(a.text()) == fold_case(b.text());
        case ValueType::Logical: return a.logical() == b.logical();
        default: return false;
    }
}

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xe ? 3 : (c >> 3) == 0x1e ? 4 : 0;
        bool ok = len > 0 && i + len <= s.size();
        char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1f) : len == 3 ? (c & 0x0f) : (c & 0x07);
        for (std::size_t k = 1; ok && k < len; ++k) {
            const auto cc = static_cast<unsigned char>(s[i + k]);
            ok = (cc >> 6) == 0x2;
            cp = (cp << 6) | (cc & 0x3f);
        }
        if (!ok) {
            // Keep stray bytes as private-use code points so they round-trip.
            out.push_back(0xDC00 + c);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(std::u32string_view s) {
    std::string out;
    for (char32_t cp : s) {
        if (cp >= 0xDC80 && cp <= 0xDCFF) {
            out += static_cast<char>(cp - 0xDC00);
        } else if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3f));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
            out += static_cast<char>(0x80 | (cp & 0x3f));
        } else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3f));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
            out += static_cast<char>(0x80 | (cp & 0x3f));
        }
    }
    return out;
}

std::size_t char_length(std::string_view s) { return decode_utf8(s).size(); }

}  // namespace sprego::eval
