#include "sprego/data/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace sprego::data {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Div0: return "#DIV/0!";
        case ErrorKind::Value: return "#VALUE!";
        case ErrorKind::NA: return "#N/A";
        case ErrorKind::Ref: return "#REF!";
        case ErrorKind::Name: return "#NAME?";
        case ErrorKind::Num: return "#NUM!";
    }
    return "#?";
}

std::optional<ErrorKind> parse_error_kind(std::string_view text) {
    for (ErrorKind k : kAllErrorKinds) {
        if (text == to_string(k)) return k;
    }
    return std::nullopt;
}

const char* to_string(ValueType type) {
    switch (type) {
        case ValueType::Blank: return "blank";
        case ValueType::Number: return "number";
        case ValueType::Text: return "text";
        case ValueType::Logical: return "logical";
        case ValueType::Error: return "error";
    }
    return "?";
}

Value::Value(double n) {
    if (std::isfinite(n)) {
        v_ = n;
    } else {
        v_ = Error{ErrorKind::Num};
    }
}

std::string format_general(double n) {
    if (n == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", n);
    return buf;
}

std::string to_display(const Value& v) {
    switch (v.type()) {
        case ValueType::Blank: return "";
        case ValueType::Number: return format_general(v.number());
        case ValueType::Text: return v.text();
        case ValueType::Logical: return v.logical() ? "TRUE" : "FALSE";
        case ValueType::Error: return to_string(v.error());
    }
    return "";
}

std::string to_debug(const Value& v) {
    switch (v.type()) {
        case ValueType::Blank: return "<blank>";
        case ValueType::Text: return "\"" + v.text() + "\"";
        default: return to_display(v);
    }
}

std::optional<double> parse_numeral(std::string_view text) {
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto digit = [&](std::size_t p) { return p < n && text[p] >= '0' && text[p] <= '9'; };
    if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
    const std::size_t mantissa = i;
    std::size_t int_digits = 0;
    std::size_t frac_digits = 0;
    while (digit(i)) ++i, ++int_digits;
    if (i < n && text[i] == '.') {
        ++i;
        while (digit(i)) ++i, ++frac_digits;
    }
    if (int_digits + frac_digits == 0) return std::nullopt;
    if (i < n && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
        if (!digit(i)) return std::nullopt;
        while (digit(i)) ++i;
    }
    if (i != n) return std::nullopt;

    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data() + mantissa, text.data() + n, value);
    if (ec != std::errc{} || ptr != text.data() + n || !std::isfinite(value)) return std::nullopt;
    return text[0] == '-' ? -value : value;
}

RangeView RangeView::column(std::vector<Value> values) {
    const std::size_t n = values.size();
    return RangeView(n, 1, std::move(values));
}

}  // namespace sprego::data
