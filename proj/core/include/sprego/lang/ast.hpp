#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sprego::lang {

/// Half-open byte range [start, end) into the formula source.
struct Span {
    std::size_t start = 0;
    std::size_t end = 0;

    friend bool operator==(const Span&, const Span&) = default;
};

/// Owning pointer with value semantics, so recursive AST nodes copy deeply.
template <typename T>
class Box {
public:
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT(implicit)
    Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other) {
        if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;
    ~Box() = default;

    T& operator*() { return *ptr_; }
    const T& operator*() const { return *ptr_; }
    T* operator->() { return ptr_.get(); }
    const T* operator->() const { return ptr_.get(); }

    friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

private:
    std::unique_ptr<T> ptr_;
};

/// A1-style reference. `row` is 1-based; column letters are stored uppercase.
struct CellRef {
    std::string column;
    std::uint32_t row = 1;
    bool column_absolute = false;
    bool row_absolute = false;
    Span span;

    /// 1-based column number (A = 1, Z = 26, AA = 27).
    std::uint32_t column_index() const;
    bool is_absolute() const { return column_absolute && row_absolute; }
    bool is_mixed() const { return column_absolute != row_absolute; }

    // Spans are positional metadata and never take part in structural equality.
    friend bool operator==(const CellRef& a, const CellRef& b) {
        return a.column == b.column && a.row == b.row && a.column_absolute == b.column_absolute &&
               a.row_absolute == b.row_absolute;
    }
};

std::string column_letters(std::uint32_t index);
CellRef make_cell(std::uint32_t column, std::uint32_t row);

/// Rectangular A1:B2 range, normalized so that start is the top-left corner.
struct RangeRef {
    CellRef start;
    CellRef end;

    std::uint32_t rows() const { return end.row - start.row + 1; }
    std::uint32_t cols() const { return end.column_index() - start.column_index() + 1; }

    friend bool operator==(const RangeRef&, const RangeRef&) = default;
};

RangeRef normalize(RangeRef range);

enum class UnaryOp { Negate, Plus, Percent };

enum class BinaryOp { Pow, Mul, Div, Add, Sub, Concat, Eq, Ne, Lt, Le, Gt, Ge };

const char* to_string(UnaryOp op);
const char* to_string(BinaryOp op);
bool is_comparison(BinaryOp op);

class Expr;

struct NumberLit {
    double value = 0.0;
    friend bool operator==(const NumberLit&, const NumberLit&) = default;
};

struct TextLit {
    std::string value;
    friend bool operator==(const TextLit&, const TextLit&) = default;
};

struct BoolLit {
    bool value = false;
    friend bool operator==(const BoolLit&, const BoolLit&) = default;
};

/// Identifier that resolves to a table column (or to the whole table by name).
struct NameRef {
    std::string name;
    friend bool operator==(const NameRef&, const NameRef&) = default;
};

struct Unary {
    UnaryOp op;
    Box<Expr> operand;
    friend bool operator==(const Unary&, const Unary&) = default;
};

struct Binary {
    BinaryOp op;
    Box<Expr> lhs;
    Box<Expr> rhs;
    friend bool operator==(const Binary&, const Binary&) = default;
};

struct Call {
    std::string name;  // uppercase
    std::vector<Expr> args;
    Span name_span;

    friend bool operator==(const Call& a, const Call& b);
};

class Expr {
public:
    using Node = std::variant<NumberLit, TextLit, BoolLit, CellRef, RangeRef, NameRef, Unary, Binary, Call>;

    Expr() : node_(NumberLit{}) {}
    Expr(Node node, Span span = {}) : node_(std::move(node)), span_(span) {}  // NOLINT(implicit)

    const Node& node() const { return node_; }
    Node& node() { return node_; }
    Span span() const { return span_; }

    template <typename T>
    bool is() const {
        return std::holds_alternative<T>(node_);
    }
    template <typename T>
    const T* as() const {
        return std::get_if<T>(&node_);
    }
    template <typename T>
    T* as() {
        return std::get_if<T>(&node_);
    }

    friend bool operator==(const Expr& a, const Expr& b) { return a.node_ == b.node_; }

private:
    Node node_;
    Span span_;
};

inline bool operator==(const Call& a, const Call& b) { return a.name == b.name && a.args == b.args; }

/// A parsed formula: the expression plus the `{=...}` array-entry flag, which only exists at the root.
struct Formula {
    Expr body;
    bool array_entered = false;

    friend bool operator==(const Formula&, const Formula&) = default;
};

// Construction helpers used by the rewriter and tests.
Expr number(double v);
Expr text(std::string v);
Expr boolean(bool v);
Expr name(std::string v);
Expr cell(CellRef ref);
Expr range(RangeRef ref);
Expr unary(UnaryOp op, Expr operand);
Expr binary(BinaryOp op, Expr lhs, Expr rhs);
Expr call(std::string name, std::vector<Expr> args);

template <typename... Visitors>
struct Overloaded : Visitors... {
    using Visitors::operator()...;
};
template <typename... Visitors>
Overloaded(Visitors...) -> Overloaded<Visitors...>;

/// Pre-order traversal over every node of the tree.
template <typename Fn>
void walk(const Expr& expr, Fn&& fn) {
    fn(expr);
    std::visit(Overloaded{
                   [&](const Unary& u) { walk(*u.operand, fn); },
                   [&](const Binary& b) {
                       walk(*b.lhs, fn);
                       walk(*b.rhs, fn);
                   },
                   [&](const Call& c) {
                       for (const auto& a : c.args) walk(a, fn);
                   },
                   [](const auto&) {},
               },
               expr.node());
}

}  // namespace sprego::lang
