#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sprego/data/value.hpp"
#include "sprego/lang/ast.hpp"

namespace sprego::eval {

using data::ErrorKind;
using data::RangeView;
using data::Value;

/// Result of evaluating any expression: a single value or a block of values.
using Operand = std::variant<Value, RangeView>;

/// Arithmetic coercion: numeral text parses, logicals become 1/0, blank is 0.
/// Anything else yields Error(VALUE); errors pass through unchanged.
Value to_number(const Value& v);

/// Text coercion used by `&` and text functions.
Value to_text(const Value& v);

/// IF/AND/OR/NOT coercion: numbers are true when nonzero, blank is false.
/// Text yields Error(VALUE).
Value to_logical(const Value& v);

/// Three-way comparison over the single total order
///   Number < Text < Logical
/// with text compared case-insensitively and Blank taking the empty value of
/// whatever it is compared with (0, "" or FALSE). Neither argument may be an error.
int compare(const Value& a, const Value& b);

/// Applies a comparison operator; returns Logical, or the first operand error.
Value compare_op(lang::BinaryOp op, const Value& a, const Value& b);

/// Type-sensitive equality used by exact lookups: same type and equal value,
/// text ignoring case. Blank equals nothing.
bool exact_equal(const Value& a, const Value& b);

/// Case-insensitive key: ASCII letters folded to lowercase.
std::string fold_case(std::string_view s);

// UTF-8 aware character helpers; invalid bytes count as one character each.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
std::size_t char_length(std::string_view s);

}  // namespace sprego::eval
