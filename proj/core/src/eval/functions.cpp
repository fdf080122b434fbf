#include "sprego/eval/functions.hpp"

#include <algorithm>

namespace sprego::eval {

namespace {

constexpr auto S = Param::Scalar;
constexpr auto R = Param::Range;
constexpr auto N = FunctionSpec::kVariadic;

using C = Category;
using L = Lifting;

const std::vector<FunctionSpec>& catalog() {
    static const std::vector<FunctionSpec> specs = {
        // core: text
        {"LEN", 1, 1, C::Text, L::Elementwise, {S}, {}},
        {"LEFT", 1, 2, C::Text, L::Elementwise, {S, S}, {}},
        {"RIGHT", 1, 2, C::Text, L::Elementwise, {S, S}, {}},
        {"SEARCH", 2, 3, C::Text, L::Elementwise, {S, S, S}, {}},
        // core: maths
        {"SUM", 1, N, C::Math, L::Aggregating, {}, {R}},
        {"AVERAGE", 1, N, C::Math, L::Aggregating, {}, {R}},
        {"MIN", 1, N, C::Math, L::Aggregating, {}, {R}},
        {"MAX", 1, N, C::Math, L::Aggregating, {}, {R}},
        // core: conditions, arrays, errors
        {"IF", 2, 3, C::ConditionArrayError, L::Special, {S, S, S}, {}, false},
        {"MATCH", 2, 3, C::ConditionArrayError, L::Special, {S, R, S}, {}},
        {"INDEX", 2, 3, C::ConditionArrayError, L::Special, {R, S, S}, {}},
        {"ISERROR", 1, 1, C::ConditionArrayError, L::Elementwise, {S}, {}, false},
        // extended
        {"SUBSTITUTE", 3, 4, C::Extended, L::Elementwise, {S, S, S, S}, {}},
        {"SMALL", 2, 2, C::Extended, L::Aggregating, {R, S}, {}},
        {"LARGE", 2, 2, C::Extended, L::Aggregating, {R, S}, {}},
        {"AND", 1, N, C::Extended, L::Aggregating, {}, {R}},
        {"OR", 1, N, C::Extended, L::Aggregating, {}, {R}},
        {"NOT", 1, 1, C::Extended, L::Elementwise, {S}, {}},
        {"INT", 1, 1, C::Extended, L::Elementwise, {S}, {}},
        {"ROUND", 2, 2, C::Extended, L::Elementwise, {S, S}, {}},
        {"RAND", 0, 0, C::Extended, L::Special, {}, {}},
        {"OFFSET", 3, 5, C::Extended, L::Special, {R, S, S, S, S}, {}},
        {"ROW", 0, 1, C::Extended, L::Special, {R}, {}},
        {"COLUMN", 0, 1, C::Extended, L::Special, {R}, {}},
        // problem-specific baselines
        {"COUNT", 1, N, C::Baseline, L::Aggregating, {}, {R}},
        {"COUNTA", 1, N, C::Baseline, L::Aggregating, {}, {R}},
        {"COUNTIF", 2, 2, C::Baseline, L::Aggregating, {R, S}, {}},
        {"COUNTIFS", 2, N, C::Baseline, L::Aggregating, {}, {R, S}},
        {"SUMIF", 2, 3, C::Baseline, L::Aggregating, {R, S, R}, {}},
        {"SUMIFS", 3, N, C::Baseline, L::Aggregating, {R}, {R, S}},
        {"AVERAGEIF", 2, 3, C::Baseline, L::Aggregating, {R, S, R}, {}},
        {"VLOOKUP", 3, 4, C::Baseline, L::Special, {S, R, S, S}, {}},
        {"HLOOKUP", 3, 4, C::Baseline, L::Special, {S, R, S, S}, {}},
        {"IFERROR", 2, 2, C::Baseline, L::Elementwise, {S, S}, {}, false},
    };
    return specs;
}

}  // namespace

const char* to_string(Category c) {
    switch (c) {
        case Category::Text: return "text";
        case Category::Math: return "math";
        case Category::ConditionArrayError: return "conditional/array/error";
        case Category::Extended: return "extended";
        case Category::Baseline: return "problem-specific-baseline";
    }
    return "?";
}

Param FunctionSpec::param(std::size_t position) const {
    if (position < fixed.size()) return fixed[position];
    if (repeat.empty()) return Param::Scalar;
    return repeat[(position - fixed.size()) % repeat.size()];
}

std::span<const FunctionSpec> function_catalog() { return catalog(); }

const FunctionSpec* find_function(std::string_view upper_name) {
    const auto& specs = catalog();
    auto it = std::find_if(specs.begin(), specs.end(), [&](const FunctionSpec& s) { return s.name == upper_name; });
    return it == specs.end() ? nullptr : &*it;
}

bool is_sprego_function(std::string_view upper_name) {
    return std::find(kCoreFunctions.begin(), kCoreFunctions.end(), upper_name) != kCoreFunctions.end() ||
           std::find(kExtendedFunctions.begin(), kExtendedFunctions.end(), upper_name) != kExtendedFunctions.end();
}

bool is_baseline_function(std::string_view upper_name) {
    return std::find(kBaselineFunctions.begin(), kBaselineFunctions.end(), upper_name) != kBaselineFunctions.end();
}

}  // namespace sprego::eval
