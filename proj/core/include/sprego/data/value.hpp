#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sprego::data {

enum class ErrorKind { Div0, Value, NA, Ref, Name, Num };

inline constexpr ErrorKind kAllErrorKinds[] = {ErrorKind::Div0, ErrorKind::Value, ErrorKind::NA,
                                               ErrorKind::Ref,  ErrorKind::Name,  ErrorKind::Num};

/// Display form, e.g. `#DIV/0!`.
const char* to_string(ErrorKind kind);
std::optional<ErrorKind> parse_error_kind(std::string_view text);

struct Blank {
    friend bool operator==(Blank, Blank) { return true; }
};

struct Error {
    ErrorKind kind;
    friend bool operator==(Error, Error) = default;
};

enum class ValueType { Blank, Number, Text, Logical, Error };

const char* to_string(ValueType type);

/// A single cell datum. Numbers are always finite: constructing one from a
/// NaN or infinity yields Error(NUM) instead.
class Value {
public:
    Value() = default;
    Value(Blank) {}  // NOLINT(implicit)
    Value(double n);  // NOLINT(implicit)
    Value(int n) : Value(static_cast<double>(n)) {}  // NOLINT(implicit)
    Value(std::string s) : v_(std::move(s)) {}  // NOLINT(implicit)
    Value(const char* s) : v_(std::string(s)) {}  // NOLINT(implicit)
    Value(bool b) : v_(b) {}  // NOLINT(implicit)
    Value(ErrorKind e) : v_(Error{e}) {}  // NOLINT(implicit)
    Value(Error e) : v_(e) {}  // NOLINT(implicit)

    ValueType type() const { return static_cast<ValueType>(v_.index()); }

    bool is_blank() const { return type() == ValueType::Blank; }
    bool is_number() const { return type() == ValueType::Number; }
    bool is_text() const { return type() == ValueType::Text; }
    bool is_logical() const { return type() == ValueType::Logical; }
    bool is_error() const { return type() == ValueType::Error; }

    double number() const { return std::get<double>(v_); }
    const std::string& text() const { return std::get<std::string>(v_); }
    bool logical() const { return std::get<bool>(v_); }
    ErrorKind error() const { return std::get<Error>(v_).kind; }

    /// Exact structural equality (same type, same payload, bitwise-equal numbers).
    friend bool operator==(const Value&, const Value&) = default;

private:
    std::variant<Blank, double, std::string, bool, Error> v_;
};

/// Human-readable rendering: numbers in general format, logicals as
/// TRUE/FALSE, errors by display string, blank as empty text.
std::string to_display(const Value& v);

/// Debug rendering that keeps the type visible (`"abc"` vs `abc`, `<blank>`).
std::string to_debug(const Value& v);

/// Locale-free decimal numeral: optional sign, digits with optional decimal
/// point, optional exponent. Digit grouping (`1,000`) is rejected.
std::optional<double> parse_numeral(std::string_view text);

/// Spreadsheet general number format (up to 15 significant digits).
std::string format_general(double n);

/// Rectangular block of values in row-major order. A vector is a view with a
/// single row or a single column. `origin` records the top-left cell when the
/// view came from a reference (1-based column and row).
struct CellPosition {
    std::uint32_t column = 1;
    std::uint32_t row = 1;
    friend bool operator==(const CellPosition&, const CellPosition&) = default;
};

struct RangeView {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Value> cells;
    std::optional<CellPosition> origin;

    RangeView() = default;
    RangeView(std::size_t r, std::size_t c, std::vector<Value> values, std::optional<CellPosition> at = std::nullopt)
        : rows(r), cols(c), cells(std::move(values)), origin(at) {}

    std::size_t size() const { return cells.size(); }
    bool is_vector() const { return rows == 1 || cols == 1; }
    bool is_single() const { return rows == 1 && cols == 1; }
    const Value& at(std::size_t row, std::size_t col) const { return cells[row * cols + col]; }

    static RangeView column(std::vector<Value> values);

    /// Shape and contents; origin is ignored.
    friend bool operator==(const RangeView& a, const RangeView& b) {
        return a.rows == b.rows && a.cols == b.cols && a.cells == b.cells;
    }
};

}  // namespace sprego::data
