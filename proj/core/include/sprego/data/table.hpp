#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "sprego/data/value.hpp"
#include "sprego/lang/ast.hpp"

namespace sprego::data {

struct Column {
    std::string header;
    std::vector<Value> cells;
};

/// Named columns of equal length. Immutable once built; headers are unique
/// ignoring case.
class Table {
public:
    Table() = default;

    /// Throws std::invalid_argument when columns differ in length or headers collide.
    Table(std::string name, std::vector<Column> columns);

    const std::string& name() const { return name_; }
    const std::vector<Column>& columns() const { return columns_; }
    std::size_t row_count() const { return row_count_; }
    std::size_t column_count() const { return columns_.size(); }

    /// Case-insensitive header lookup; 0-based column index.
    std::optional<std::size_t> find_column(std::string_view header) const;

    /// 1-based row and column; nullptr when out of the table.
    const Value* cell(std::uint32_t column, std::uint32_t row) const;

private:
    std::string name_;
    std::vector<Column> columns_;
    std::size_t row_count_ = 0;
};

class CsvError : public std::runtime_error {
public:
    CsvError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct CsvOptions {
    bool has_header = true;
    std::string table_name = "table";
};

/// RFC 4180 reader. Unquoted fields are typed: decimal numeral -> Number,
/// TRUE/FALSE (any case) -> Logical, empty -> Blank, otherwise Text. Quoted
/// fields are always Text, so `""` is an empty string rather than a blank.
Table load_csv(std::string_view bytes, const CsvOptions& options = {});
Table load_csv_file(const std::string& path, const CsvOptions& options = {});

/// Result of resolving a reference: a block of cells or a single error value.
using Resolved = std::variant<RangeView, Value>;

/// Cell A1 is the first data row of the first column. Names match column
/// headers first, then the table name (yielding the whole table).
/// Out-of-table references give Error(REF), unknown names Error(NAME).
Resolved resolve(const Table& table, const lang::CellRef& ref);
Resolved resolve(const Table& table, const lang::RangeRef& ref);
Resolved resolve(const Table& table, const lang::NameRef& ref);

/// Rectangular block by 1-based coordinates, Error(REF) when any part falls outside.
Resolved resolve_block(const Table& table, std::int64_t column, std::int64_t row, std::int64_t width,
                       std::int64_t height);

struct ColumnProfile {
    std::string header;
    std::map<ValueType, std::size_t> counts;  // every ValueType present, zero included
    std::string dominant;                      // value type name, or "blank" for an all-blank column
    std::optional<double> min;
    std::optional<double> max;
};

/// Per-column type census. Ties for the dominant type go Number > Text > Logical > Error.
std::vector<ColumnProfile> profile(const Table& table);

nlohmann::ordered_json to_json(const Value& v);
Value value_from_json(const nlohmann::json& j);
/// `{name, headers, rows}` with rows as arrays of cell values.
nlohmann::ordered_json to_json(const Table& table);
Table table_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const RangeView& view);
nlohmann::ordered_json to_json(const std::vector<ColumnProfile>& profiles);

}  // namespace sprego::data
