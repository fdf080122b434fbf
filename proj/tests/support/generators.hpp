#pragma once

// Random formula generators shared by the property tests and the acceptance
// binary. Everything draws from a caller-owned mt19937_64 so runs replay.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sprego/equiv/equivalence.hpp"
#include "sprego/eval/functions.hpp"
#include "sprego/lang/ast.hpp"
#include "sprego/lang/parser.hpp"

namespace sprego::testing {

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

inline std::string random_identifier(std::mt19937_64& rng) {
    static const char* kStems[] = {"age", "name", "score", "qty", "price", "n_total", "city", "x_", "val"};
    std::string s = kStems[pick(rng, std::size(kStems))];
    // "_" keeps stems like qty7 from lexing as the cell QTY7.
    if (pick(rng, 3) == 0) s += "_" + std::to_string(pick(rng, 10));
    if (pick(rng, 2) == 0) s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

inline lang::CellRef random_cell(std::mt19937_64& rng) {
    lang::CellRef c;
    const std::uint32_t col = 1 + static_cast<std::uint32_t>(pick(rng, pick(rng, 4) == 0 ? 16384 : 30));
    c.column = lang::column_letters(col);
    c.row = 1 + static_cast<std::uint32_t>(pick(rng, pick(rng, 4) == 0 ? 1048576 : 100));
    c.column_absolute = pick(rng, 3) == 0;
    c.row_absolute = pick(rng, 3) == 0;
    return c;
}

inline double random_number(std::mt19937_64& rng) {
    switch (pick(rng, 4)) {
        case 0: return static_cast<double>(pick(rng, 100));
        case 1: return static_cast<double>(pick(rng, 100000)) / 1000.0;
        case 2: return static_cast<double>(pick(rng, 1000)) * 1e10;
        default: return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
}

inline std::string random_text(std::mt19937_64& rng) {
    static const char* kPieces[] = {"a", "b", " ", "\"", "Z", "9", ",", "(", "*", "?", "<", ">", "=", "&", "é"};
    std::string s;
    const std::size_t len = pick(rng, 5);
    for (std::size_t i = 0; i < len; ++i) s += kPieces[pick(rng, std::size(kPieces))];
    return s;
}

/// Any syntactically valid expression, up to `depth` levels of nesting.
inline lang::Expr random_expr(std::mt19937_64& rng, int depth) {
    using namespace lang;
    const std::size_t leaf_kinds = 6;
    const std::size_t choice = depth <= 0 ? pick(rng, leaf_kinds) : pick(rng, leaf_kinds + 5);
    switch (choice) {
        case 0: return number(random_number(rng));
        case 1: return text(random_text(rng));
        case 2: return boolean(pick(rng, 2) == 0);
        case 3: return cell(random_cell(rng));
        case 4: return range(normalize(RangeRef{random_cell(rng), random_cell(rng)}));
        case 5: return name(random_identifier(rng));
        case 6:
        case 7: {
            static const BinaryOp kOps[] = {BinaryOp::Pow, BinaryOp::Mul, BinaryOp::Div, BinaryOp::Add,
                                            BinaryOp::Sub, BinaryOp::Concat, BinaryOp::Eq, BinaryOp::Ne,
                                            BinaryOp::Lt,  BinaryOp::Le,  BinaryOp::Gt,  BinaryOp::Ge};
            return binary(kOps[pick(rng, std::size(kOps))], random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        }
        case 8: {
            static const UnaryOp kOps[] = {UnaryOp::Negate, UnaryOp::Plus, UnaryOp::Percent};
            return unary(kOps[pick(rng, std::size(kOps))], random_expr(rng, depth - 1));
        }
        default: {
            const auto catalog = eval::function_catalog();
            const auto& spec = catalog[pick(rng, catalog.size())];
            std::vector<Expr> args;
            const std::size_t n = pick(rng, 4);
            for (std::size_t i = 0; i < n; ++i) args.push_back(random_expr(rng, depth - 1));
            return call(std::string(spec.name), std::move(args));
        }
    }
}

/// Source text of a random valid formula, sometimes array-entered and
/// sometimes with cosmetic whitespace after commas and parentheses.
inline std::string random_source(std::mt19937_64& rng) {
    lang::Formula f{random_expr(rng, 1 + static_cast<int>(pick(rng, 4))), pick(rng, 4) == 0};
    std::string s = lang::format(f);
    if (pick(rng, 2) == 0) {
        std::string spaced;
        bool in_string = false;
        for (char c : s) {
            if (c == '"') in_string = !in_string;
            spaced += c;
            if (!in_string && (c == ',' || c == '(') && pick(rng, 2) == 0) spaced += ' ';
        }
        s = spaced;
    }
    return s;
}

/// Source that must fail to lex or parse.
inline std::string random_malformed(std::mt19937_64& rng) {
    std::string s = lang::format(lang::Formula{random_expr(rng, 2), false});
    switch (pick(rng, 8)) {
        case 0: return s + "+";
        case 1: return s + "(";
        case 2: return s + ")";
        case 3: return s + "\"open";
        case 4: return s + "#";
        case 5: return "=(" + s.substr(1);
        case 6: return s + ",1";
        default: return s + "*1..2";
    }
}

/// Column names used by the elementwise generator and the tables it runs on.
inline const std::vector<std::string>& elementwise_columns() {
    static const std::vector<std::string> cols = {"a", "b", "s", "m"};
    return cols;
}

inline equiv::DatasetSchema elementwise_schema(std::size_t rows) {
    using G = equiv::Generator;
    return equiv::DatasetSchema{"elementwise",
                                {{"a", G::with_blanks(-5, 5)},
                                 {"b", G::with_errors(0, 4, 0.1)},
                                 {"s", G::text("aB1 ", 4)},
                                 {"m", G::mixed()}},
                                rows,
                                "data"};
}

/// Formula built only from elementwise operators and functions over the
/// columns above; at least one column reference is present.
inline lang::Expr random_elementwise(std::mt19937_64& rng, int depth, bool need_column = true) {
    using namespace lang;
    const auto& cols = elementwise_columns();
    if (depth <= 0 || (need_column && pick(rng, 4) == 0)) {
        if (need_column || pick(rng, 2) == 0) return name(cols[pick(rng, cols.size())]);
        switch (pick(rng, 3)) {
            case 0: return number(static_cast<double>(pick(rng, 7)));
            case 1: return text(pick(rng, 2) == 0 ? "a" : "12");
            default: return boolean(pick(rng, 2) == 0);
        }
    }
    const bool left_needs = need_column && pick(rng, 2) == 0;
    const bool right_needs = need_column && !left_needs;
    switch (pick(rng, 5)) {
        case 0:
        case 1: {
            static const BinaryOp kOps[] = {BinaryOp::Pow, BinaryOp::Mul, BinaryOp::Div, BinaryOp::Add,
                                            BinaryOp::Sub, BinaryOp::Concat, BinaryOp::Eq, BinaryOp::Ne,
                                            BinaryOp::Lt,  BinaryOp::Le,  BinaryOp::Gt,  BinaryOp::Ge};
            return binary(kOps[pick(rng, std::size(kOps))], random_elementwise(rng, depth - 1, left_needs),
                          random_elementwise(rng, depth - 1, right_needs));
        }
        case 2: {
            static const UnaryOp kOps[] = {UnaryOp::Negate, UnaryOp::Percent};
            return unary(kOps[pick(rng, 2)], random_elementwise(rng, depth - 1, need_column));
        }
        case 3: {
            static const char* kUnary[] = {"LEN", "INT", "NOT", "ISERROR", "LEFT", "RIGHT"};
            return call(kUnary[pick(rng, std::size(kUnary))], {random_elementwise(rng, depth - 1, need_column)});
        }
        default: {
            switch (pick(rng, 4)) {
                case 0:
                    return call("IF", {random_elementwise(rng, depth - 1, need_column), random_elementwise(rng, depth - 1, false),
                                       random_elementwise(rng, depth - 1, false)});
                case 1:
                    return call("ROUND", {random_elementwise(rng, depth - 1, need_column), number(static_cast<double>(pick(rng, 3)))});
                case 2:
                    return call("SEARCH", {text("a"), random_elementwise(rng, depth - 1, need_column)});
                default:
                    return call("SUBSTITUTE", {random_elementwise(rng, depth - 1, need_column), text("a"), text("xy")});
            }
        }
    }
}

}  // namespace sprego::testing
