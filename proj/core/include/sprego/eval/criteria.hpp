#pragma once

#include <string_view>

#include "sprego/eval/semantics.hpp"

namespace sprego::eval {

/// A COUNTIF-style condition reified into an operator and an operand.
///
/// Text criteria are an optional leading operator (`>=`, `<=`, `<>`, `>`,
/// `<`, `=`; default `=`) followed by an operand. Numeral operands become
/// numbers, everything else stays text. Non-text criteria are `=value`.
struct Criteria {
    lang::BinaryOp op = lang::BinaryOp::Eq;
    Value operand;

    friend bool operator==(const Criteria&, const Criteria&) = default;
};

/// Splits a leading comparison operator off `text`; returns the remainder.
std::string_view split_criteria_operator(std::string_view text, lang::BinaryOp& op);

/// Criteria from a runtime value. Error values are the caller's concern.
Criteria parse_criteria(const Value& v);

/// True when a text criterion's operand contains `*` or `?`.
bool has_wildcard(const Criteria& c);

/// Predicate result for one cell: Logical, or an error from the cell.
/// This is exactly the comparison operator `cell <op> operand`.
Value criteria_match(const Value& cell, const Criteria& c);

}  // namespace sprego::eval
