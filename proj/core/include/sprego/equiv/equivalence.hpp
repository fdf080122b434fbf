#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sprego/data/table.hpp"
#include "sprego/eval/semantics.hpp"
#include "sprego/lang/ast.hpp"
#include "sprego/rewrite/rewrite.hpp"

namespace sprego::equiv {

class SchemaError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class GeneratorKind {
    Numeric,
    Text,
    Logical,
    Mixed,
    SortedAscending,
    SortedDescending,
    WithBlanks,
    WithErrors,
};

const char* to_string(GeneratorKind kind);

/// How one column is filled. Numeric-based kinds draw from [lo, hi]
/// (whole numbers when `integral`); `rate` is the blank or error share.
struct Generator {
    GeneratorKind kind = GeneratorKind::Numeric;
    double lo = 0;
    double hi = 10;
    bool integral = true;
    std::string alphabet = "abc";
    std::size_t max_len = 3;
    double rate = 0.25;

    static Generator numeric(double lo, double hi, bool integral = true);
    static Generator text(std::string alphabet, std::size_t max_len);
    static Generator logical();
    static Generator mixed();
    static Generator sorted_ascending(double lo, double hi);
    static Generator sorted_descending(double lo, double hi);
    static Generator with_blanks(double lo, double hi, double rate = 0.25);
    static Generator with_errors(double lo, double hi, double rate = 0.2);
};

struct ColumnSpec {
    std::string name;
    Generator generator;
};

struct DatasetSchema {
    std::string label;
    std::vector<ColumnSpec> columns;
    std::size_t rows = 1;
    std::string table_name = "data";
};

/// Deterministic in (schema, seed). Throws SchemaError on zero rows, no
/// columns, an empty text alphabet or lo > hi.
data::Table gen_dataset(const DatasetSchema& schema, std::uint64_t seed);

struct Tolerance {
    double relative = 1e-9;
    double absolute = 1e-12;
};

bool values_match(const data::Value& a, const data::Value& b, const Tolerance& tol = {});
bool operands_match(const eval::Operand& a, const eval::Operand& b, const Tolerance& tol = {});

struct Failure {
    std::string schema;
    std::uint64_t seed;  // dataset seed; also fixes the row and the RAND stream
    std::optional<std::size_t> row;
    eval::Operand original;
    eval::Operand rewritten;
};

struct Verdict {
    std::string rule_id;
    std::string original;
    std::string rewritten;
    std::size_t trials = 0;
    bool not_run = false;
    /// False when the suite's expected rule did not rewrite the case.
    bool rule_applied = true;
    std::vector<std::string> notes;
    std::vector<Failure> failures;

    bool pass() const { return rule_applied && failures.empty(); }
};

inline constexpr std::size_t kMaxRecordedFailures = 10;

/// Seed of trial `trial` of schema `schema_index`; the row used for scalar
/// evaluation is derived from it.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t schema_index, std::size_t trial);
std::size_t trial_row(std::uint64_t trial_seed, std::size_t rows);

/// Evaluates both formulas on `trials` datasets per schema under identical
/// contexts. Volatile formulas (RAND) are not run and the verdict says so.
Verdict check_equivalence(const lang::Formula& original, const lang::Formula& rewritten,
                          const std::vector<DatasetSchema>& schemas, std::size_t trials, std::uint64_t seed,
                          const Tolerance& tol = {});

/// Generic schemas for an arbitrary formula pair: one column per referenced
/// name, then lettered columns and rows enough for every A1 reference. Each
/// schema fills all columns with one generator kind.
std::vector<DatasetSchema> schemas_for(const lang::Formula& original, const lang::Formula& rewritten);

/// One shipped equivalence case: a baseline formula and the schemas it runs on.
struct RuleCase {
    rewrite::RuleId rule;
    std::string source;
    std::vector<DatasetSchema> schemas;
};

const std::vector<RuleCase>& rule_suite();

inline constexpr std::size_t kDefaultTrials = 200;

/// Rewrites each suite case and checks it. A case whose expected rule does
/// not fire fails with a note.
std::vector<Verdict> run_suite(std::uint64_t seed, std::size_t trials = kDefaultTrials,
                               std::optional<rewrite::RuleId> only = std::nullopt);

rewrite::RewriteOptions options_for(const DatasetSchema& schema);

nlohmann::ordered_json to_json(const eval::Operand& operand);
nlohmann::ordered_json to_json(const Verdict& verdict);

}  // namespace sprego::equiv
