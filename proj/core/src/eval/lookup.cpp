#include "sprego/eval/lookup.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace sprego::eval {

namespace {

// Ordering used by the ordered match types. Error cells sort after everything.
int search_compare(const Value& cell, const Value& lookup) {
    if (cell.is_error()) return 1;
    return compare(cell, lookup);
}

/// First index in [0, n) for which `pred` is false, assuming pred holds on a prefix.
template <typename Pred>
std::size_t partition_point(std::size_t n, Pred pred) {
    std::size_t lo = 0;
    std::size_t len = n;
    while (len > 0) {
        const std::size_t half = len / 2;
        if (pred(lo + half)) {
            lo += half + 1;
            len -= half + 1;
        } else {
            len = half;
        }
    }
    return lo;
}

}  // namespace

Value match_position(const Value& lookup, const RangeView& vector, MatchType type) {
    if (lookup.is_error()) return lookup;
    if (!vector.is_vector()) return ErrorKind::Value;
    const auto& cells = vector.cells;

    std::size_t position = 0;
    switch (type) {
        case MatchType::Exact: {
            auto it = std::find_if(cells.begin(), cells.end(), [&](const Value& c) { return exact_equal(c, lookup); });
            if (it != cells.end()) position = static_cast<std::size_t>(it - cells.begin()) + 1;
            break;
        }
        case MatchType::Ascending:
            position = partition_point(cells.size(), [&](std::size_t i) { return search_compare(cells[i], lookup) <= 0; });
            break;
        case MatchType::Descending:
            position = partition_point(cells.size(), [&](std::size_t i) {
                return !cells[i].is_error() && search_compare(cells[i], lookup) >= 0;
            });
            break;
    }
    if (position == 0) return ErrorKind::NA;
    return static_cast<double>(position);
}

Value index_select(const RangeView& source, std::int64_t row, std::optional<std::int64_t> col) {
    if (source.size() == 0) return ErrorKind::Ref;
    if (!col) {
        if (!source.is_vector()) return ErrorKind::Value;
        if (row < 1 || static_cast<std::size_t>(row) > source.size()) return ErrorKind::Ref;
        return source.cells[static_cast<std::size_t>(row - 1)];
    }
    if (row < 1 || *col < 1 || static_cast<std::size_t>(row) > source.rows ||
        static_cast<std::size_t>(*col) > source.cols)
        return ErrorKind::Ref;
    return source.at(static_cast<std::size_t>(row - 1), static_cast<std::size_t>(*col - 1));
}

Value search_position(std::string_view needle, std::string_view haystack, std::int64_t start) {
    const std::u32string n = decode_utf8(fold_case(needle));
    const std::u32string h = decode_utf8(fold_case(haystack));
    if (start < 1) return ErrorKind::Value;
    if (static_cast<std::size_t>(start) > h.size()) {
        if (n.empty() && h.empty() && start == 1) return 1.0;
        return ErrorKind::Value;
    }
    const auto pos = h.find(n, static_cast<std::size_t>(start - 1));
    if (pos == std::u32string::npos) return ErrorKind::Value;
    return static_cast<double>(pos + 1);
}

}  // namespace sprego::eval
