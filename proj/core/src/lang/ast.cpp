#include "sprego/lang/ast.hpp"

#include <algorithm>
#include <cctype>

namespace sprego::lang {

std::uint32_t CellRef::column_index() const {
    std::uint32_t index = 0;
    for (char c : column) index = index * 26 + static_cast<std::uint32_t>(c - 'A' + 1);
    return index;
}

std::string column_letters(std::uint32_t index) {
    std::string out;
    while (index > 0) {
        --index;
        out.insert(out.begin(), static_cast<char>('A' + index % 26));
        index /= 26;
    }
    return out;
}

CellRef make_cell(std::uint32_t column, std::uint32_t row) {
    CellRef ref;
    ref.column = column_letters(column);
    ref.row = row;
    return ref;
}

RangeRef normalize(RangeRef range) {
    auto& s = range.start;
    auto& e = range.end;
    if (s.column_index() > e.column_index()) {
        std::swap(s.column, e.column);
        std::swap(s.column_absolute, e.column_absolute);
    }
    if (s.row > e.row) {
        std::swap(s.row, e.row);
        std::swap(s.row_absolute, e.row_absolute);
    }
    return range;
}

const char* to_string(UnaryOp op) {
    switch (op) {
        case UnaryOp::Negate: return "-";
        case UnaryOp::Plus: return "+";
        case UnaryOp::Percent: return "%";
    }
    return "?";
}

const char* to_string(BinaryOp op) {
    switch (op) {
        case BinaryOp::Pow: return "^";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Concat: return "&";
        case BinaryOp::Eq: return "=";
        case BinaryOp::Ne: return "<>";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Ge: return ">=";
    }
    return "?";
}

bool is_comparison(BinaryOp op) {
    switch (op) {
        case BinaryOp::Eq: case BinaryOp::Ne: case BinaryOp::Lt:
        case BinaryOp::Le: case BinaryOp::Gt: case BinaryOp::Ge:
            return true;
        default:
            return false;
    }
}

Expr number(double v) { return Expr(NumberLit{v}); }
Expr text(std::string v) { return Expr(TextLit{std::move(v)}); }
Expr boolean(bool v) { return Expr(BoolLit{v}); }
Expr name(std::string v) { return Expr(NameRef{std::move(v)}); }
Expr cell(CellRef ref) { return Expr(std::move(ref)); }
Expr range(RangeRef ref) { return Expr(normalize(std::move(ref))); }
Expr unary(UnaryOp op, Expr operand) { return Expr(Unary{op, std::move(operand)}); }
Expr binary(BinaryOp op, Expr lhs, Expr rhs) { return Expr(Binary{op, std::move(lhs), std::move(rhs)}); }

Expr call(std::string name, std::vector<Expr> args) {
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
    return Expr(Call{std::move(name), std::move(args), {}});
}

}  // namespace sprego::lang
