#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "sprego/data/table.hpp"
#include "sprego/eval/semantics.hpp"
#include "sprego/lang/ast.hpp"

namespace sprego::eval {

enum class Mode { Scalar, Array };

/// Everything an evaluation depends on. Two evaluations with equal contexts
/// produce identical results, RAND included.
struct EvalContext {
    std::reference_wrapper<const data::Table> table;
    /// 1-based data row used for implicit intersection in scalar mode.
    std::optional<std::size_t> current_row;
    std::uint64_t rng_seed = 0;
    Mode mode = Mode::Scalar;

    explicit EvalContext(const data::Table& t, Mode m = Mode::Scalar, std::optional<std::size_t> row = std::nullopt,
                         std::uint64_t seed = 0)
        : table(t), current_row(row), rng_seed(seed), mode(m) {}
};

/// Evaluates an expression. Never throws for data problems: failures are
/// Error values inside the result.
///
/// Scalar mode returns a single Value; vector operands in elementwise
/// positions are intersected with `current_row`. Array mode maps elementwise
/// operators and functions over arrays (scalars broadcast, mismatched lengths
/// give Error(VALUE) cells) and returns a RangeView for array results.
Operand evaluate(const lang::Expr& expr, const EvalContext& ctx);

/// Evaluates in the formula's natural mode: array mode iff array-entered.
Operand evaluate(const lang::Formula& formula, const data::Table& table,
                 std::optional<std::size_t> current_row = std::nullopt, std::uint64_t seed = 0);

/// Reduces an operand to one value the way scalar mode does (1x1 blocks
/// unwrap, columns intersect with `current_row`, anything else is Error(VALUE)).
Value intersect(const Operand& operand, std::optional<std::size_t> current_row);

using Reference = std::variant<lang::CellRef, lang::RangeRef, lang::NameRef>;

/// References syntactically present in `expr`, deduplicated, in first-seen order.
std::vector<Reference> precedents(const lang::Expr& expr);

std::string to_string(const Reference& ref);

/// Static shape check: true when array-mode evaluation of `expr` yields a
/// multi-cell result, i.e. a vector reference reaches the root through
/// elementwise positions only.
bool yields_vector(const lang::Expr& expr);

/// True when `expr` calls RAND anywhere.
bool is_volatile(const lang::Expr& expr);

}  // namespace sprego::eval
