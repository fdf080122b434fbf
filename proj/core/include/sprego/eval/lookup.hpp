#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "sprego/eval/semantics.hpp"

namespace sprego::eval {

enum class MatchType : int { Descending = -1, Exact = 0, Ascending = 1 };

/// MATCH semantics. The vector may be a row or a column.
///
/// - Exact: 1-based position of the first type-sensitive equal cell (text
///   ignoring case); Error(NA) when absent.
/// - Ascending: position of the largest value <= lookup, assuming ascending
///   order (binary search; the last of equal values wins).
/// - Descending: position of the smallest value >= lookup, assuming
///   descending order.
///
/// Unsorted data under the ordered types returns whatever the binary search
/// lands on. Error cells rank above every value. A matrix gives Error(VALUE).
Value match_position(const Value& lookup, const RangeView& vector, MatchType type);

/// INDEX: vector form when `col` is absent, matrix form otherwise.
/// Positions are 1-based; anything out of bounds or non-positive is Error(REF),
/// and omitting `col` on a true matrix is Error(VALUE).
Value index_select(const RangeView& source, std::int64_t row, std::optional<std::int64_t> col = std::nullopt);

/// SEARCH: 1-based character position of the first case-insensitive
/// occurrence of `needle` at or after `start`, or Error(VALUE).
Value search_position(std::string_view needle, std::string_view haystack, std::int64_t start = 1);

}  // namespace sprego::eval
