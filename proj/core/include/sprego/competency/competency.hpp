#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sprego/data/table.hpp"
#include "sprego/lang/ast.hpp"

namespace sprego::competency {

enum class Group { ProblemSolving, BasicIct, Design, Formulas, Formatting };

const char* to_string(Group group);

/// Knowledge an item draws on: mathematics, digital problem solving,
/// information science, algorithmic competence, ICT.
enum class Knowledge { MA, DP, IS, AC, ICT };

const char* to_string(Knowledge k);

struct CompetencyItem {
    std::string_view id;
    Group group;
    std::string_view name;
    std::vector<Knowledge> input_knowledge;
    bool bu_required;
    bool gu_required;
    /// Whether classify() can detect the item from a formula.
    bool evaluable;

    bool gu_only() const { return gu_required && !bu_required; }
};

/// Every framework row, in table order.
std::span<const CompetencyItem> framework_items();
const CompetencyItem* find_item(std::string_view id);

namespace item {
inline constexpr std::string_view kBasicArithmetic = "basic-arithmetic";
inline constexpr std::string_view kConceptOfFunctions = "concept-of-functions";
inline constexpr std::string_view kNonArrayFunctions = "non-array-functions";
inline constexpr std::string_view kArrayErrorConditionFunctions = "array-error-condition-functions";
inline constexpr std::string_view kVectorOutputArray = "vector-output-array-formulas";
inline constexpr std::string_view kOneValueOutputArray = "one-value-output-array-formulas";
inline constexpr std::string_view kComposite2To3 = "composite-2-3-level";
inline constexpr std::string_view kCompositeMultiLevel = "composite-multi-level";
}  // namespace item

enum class Level { BU, GU };

const char* to_string(Level level);

struct Trigger {
    std::string id;
    lang::Span span;  // first construct that triggered the item
};

struct CompetencyProfile {
    std::vector<Trigger> triggered;  // in framework order
    Level level = Level::BU;
    int nesting_depth = 0;

    bool has(std::string_view id) const;
};

/// Longest chain of calls nested inside calls; a bare call is 1, operators add nothing.
int nesting_depth(const lang::Expr& expr);

CompetencyProfile classify(const lang::Formula& formula);

struct FormulaEntry {
    std::string source;
    lang::Formula formula;
};

struct Report {
    struct TableSummary {
        std::string name;
        std::size_t rows;
        std::size_t columns;
    };
    std::vector<TableSummary> tables;
    std::vector<std::pair<std::string, CompetencyProfile>> formulas;
    std::optional<Level> workbook_level;           // empty when there are no formulas
    std::map<std::string, std::size_t> histogram;  // item id -> formulas triggering it
    std::vector<const CompetencyItem*> not_assessed;
};

Report report(const std::vector<data::Table>& tables, const std::vector<FormulaEntry>& formulas);

nlohmann::ordered_json to_json(const CompetencyProfile& profile);
nlohmann::ordered_json to_json(const Report& report);
std::string to_text(const Report& report);

}  // namespace sprego::competency
