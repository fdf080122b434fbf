#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace sprego::eval {

enum class Category { Text, Math, ConditionArrayError, Extended, Baseline };

const char* to_string(Category c);

/// How the evaluator treats an argument position.
///  - Scalar: one value per call; lifted elementwise over arrays in array mode
///    and reduced by implicit row intersection in scalar mode.
///  - Range: passed through whole (references keep their shape).
enum class Param { Scalar, Range };

enum class Lifting { Elementwise, Aggregating, Special };

struct FunctionSpec {
    std::string_view name;
    std::size_t min_args = 0;
    std::size_t max_args = 0;
    Category category = Category::Math;
    Lifting lifting = Lifting::Elementwise;
    std::vector<Param> fixed;   // leading positions
    std::vector<Param> repeat;  // cycled for positions past `fixed`
    bool propagates_errors = true;

    static constexpr std::size_t kVariadic = std::numeric_limits<std::size_t>::max();

    Param param(std::size_t position) const;
    bool accepts(std::size_t arg_count) const { return arg_count >= min_args && arg_count <= max_args; }
};

/// Every function the engine knows, in catalog order: core, extended, baseline.
std::span<const FunctionSpec> function_catalog();

/// Case-sensitive lookup on the uppercase name; nullptr if unknown.
const FunctionSpec* find_function(std::string_view upper_name);

inline constexpr std::array<std::string_view, 12> kCoreFunctions = {
    "LEN", "LEFT", "RIGHT", "SEARCH", "SUM", "AVERAGE", "MIN", "MAX", "IF", "MATCH", "INDEX", "ISERROR"};

inline constexpr std::array<std::string_view, 12> kExtendedFunctions = {
    "SUBSTITUTE", "SMALL", "LARGE", "AND", "OR", "NOT", "INT", "ROUND", "RAND", "OFFSET", "ROW", "COLUMN"};

inline constexpr std::array<std::string_view, 10> kBaselineFunctions = {
    "COUNT", "COUNTA", "COUNTIF", "COUNTIFS", "SUMIF", "SUMIFS", "AVERAGEIF", "VLOOKUP", "HLOOKUP", "IFERROR"};

/// Core or extended set.
bool is_sprego_function(std::string_view upper_name);
bool is_baseline_function(std::string_view upper_name);

}  // namespace sprego::eval
