#include "sprego/data/table.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace sprego::data {

namespace {

std::string fold(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

}  // namespace

Table::Table(std::string name, std::vector<Column> columns) : name_(std::move(name)), columns_(std::move(columns)) {
    row_count_ = columns_.empty() ? 0 : columns_.front().cells.size();
    std::vector<std::string> seen;
    for (const auto& c : columns_) {
        if (c.cells.size() != row_count_) throw std::invalid_argument("column '" + c.header + "' has a different length");
        auto key = fold(c.header);
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            throw std::invalid_argument("duplicate column header '" + c.header + "'");
        seen.push_back(std::move(key));
    }
}

std::optional<std::size_t> Table::find_column(std::string_view header) const {
    const auto key = fold(header);
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (fold(columns_[i].header) == key) return i;
    }
    return std::nullopt;
}

const Value* Table::cell(std::uint32_t column, std::uint32_t row) const {
    if (column == 0 || row == 0 || column > columns_.size() || row > row_count_) return nullptr;
    return &columns_[column - 1].cells[row - 1];
}

Resolved resolve_block(const Table& table, std::int64_t column, std::int64_t row, std::int64_t width,
                       std::int64_t height) {
    if (column < 1 || row < 1 || width < 1 || height < 1) return Value(ErrorKind::Ref);
    if (column + width - 1 > static_cast<std::int64_t>(table.column_count()) ||
        row + height - 1 > static_cast<std::int64_t>(table.row_count()))
        return Value(ErrorKind::Ref);
    std::vector<Value> cells;
    cells.reserve(static_cast<std::size_t>(width * height));
    for (std::int64_t r = 0; r < height; ++r) {
        for (std::int64_t c = 0; c < width; ++c) {
            cells.push_back(*table.cell(static_cast<std::uint32_t>(column + c), static_cast<std::uint32_t>(row + r)));
        }
    }
    return RangeView(static_cast<std::size_t>(height), static_cast<std::size_t>(width), std::move(cells),
                     CellPosition{static_cast<std::uint32_t>(column), static_cast<std::uint32_t>(row)});
}

Resolved resolve(const Table& table, const lang::CellRef& ref) {
    return resolve_block(table, ref.column_index(), ref.row, 1, 1);
}

Resolved resolve(const Table& table, const lang::RangeRef& ref) {
    const auto r = lang::normalize(ref);
    return resolve_block(table, r.start.column_index(), r.start.row, r.cols(), r.rows());
}

Resolved resolve(const Table& table, const lang::NameRef& ref) {
    if (auto col = table.find_column(ref.name)) {
        return RangeView(table.row_count(), 1, table.columns()[*col].cells,
                         CellPosition{static_cast<std::uint32_t>(*col + 1), 1});
    }
    if (!table.name().empty() && fold(table.name()) == fold(ref.name) && table.row_count() > 0) {
        return resolve_block(table, 1, 1, static_cast<std::int64_t>(table.column_count()),
                             static_cast<std::int64_t>(table.row_count()));
    }
    return Value(ErrorKind::Name);
}

std::vector<ColumnProfile> profile(const Table& table) {
    static constexpr ValueType kTieOrder[] = {ValueType::Number, ValueType::Text, ValueType::Logical,
                                              ValueType::Error};
    std::vector<ColumnProfile> out;
    for (const auto& col : table.columns()) {
        ColumnProfile p;
        p.header = col.header;
        for (auto t : {ValueType::Blank, ValueType::Number, ValueType::Text, ValueType::Logical, ValueType::Error})
            p.counts[t] = 0;
        for (const auto& v : col.cells) {
            ++p.counts[v.type()];
            if (v.is_number()) {
                p.min = p.min ? std::min(*p.min, v.number()) : v.number();
                p.max = p.max ? std::max(*p.max, v.number()) : v.number();
            }
        }
        p.dominant = "blank";
        std::size_t best = 0;
        for (auto t : kTieOrder) {
            if (p.counts[t] > best) {
                best = p.counts[t];
                p.dominant = to_string(t);
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

nlohmann::ordered_json to_json(const Value& v) {
    switch (v.type()) {
        case ValueType::Blank: return nullptr;
        case ValueType::Number: return v.number();
        case ValueType::Text: return v.text();
        case ValueType::Logical: return v.logical();
        case ValueType::Error: return nlohmann::ordered_json{{"error", to_string(v.error())}};
    }
    return nullptr;
}

Value value_from_json(const nlohmann::json& j) {
    if (j.is_null()) return Blank{};
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    if (j.is_object() && j.contains("error")) {
        if (auto k = parse_error_kind(j.at("error").get<std::string>())) return *k;
    }
    throw std::invalid_argument("unsupported JSON cell value: " + j.dump());
}

nlohmann::ordered_json to_json(const Table& table) {
    nlohmann::ordered_json j;
    j["name"] = table.name();
    j["headers"] = nlohmann::ordered_json::array();
    for (const auto& c : table.columns()) j["headers"].push_back(c.header);
    j["rows"] = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        auto row = nlohmann::ordered_json::array();
        for (const auto& c : table.columns()) row.push_back(to_json(c.cells[r]));
        j["rows"].push_back(std::move(row));
    }
    return j;
}

Table table_from_json(const nlohmann::json& j) {
    std::vector<Column> cols;
    for (const auto& h : j.at("headers")) cols.push_back(Column{h.get<std::string>(), {}});
    for (const auto& row : j.at("rows")) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            cols[c].cells.push_back(c < row.size() ? value_from_json(row[c]) : Value{});
        }
    }
    return Table(j.value("name", "table"), std::move(cols));
}

nlohmann::ordered_json to_json(const RangeView& view) {
    nlohmann::ordered_json j;
    j["rows"] = view.rows;
    j["cols"] = view.cols;
    auto cells = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < view.rows; ++r) {
        auto row = nlohmann::ordered_json::array();
        for (std::size_t c = 0; c < view.cols; ++c) row.push_back(to_json(view.at(r, c)));
        cells.push_back(std::move(row));
    }
    j["cells"] = std::move(cells);
    return j;
}

nlohmann::ordered_json to_json(const std::vector<ColumnProfile>& profiles) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : profiles) {
        nlohmann::ordered_json j;
        j["header"] = p.header;
        j["dominant"] = p.dominant;
        nlohmann::ordered_json counts;
        for (const auto& [type, n] : p.counts) counts[to_string(type)] = n;
        j["counts"] = std::move(counts);
        j["blank"] = p.counts.at(ValueType::Blank);
        j["min"] = p.min ? nlohmann::ordered_json(*p.min) : nlohmann::ordered_json(nullptr);
        j["max"] = p.max ? nlohmann::ordered_json(*p.max) : nlohmann::ordered_json(nullptr);
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace sprego::data
