#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sprego/lang/ast.hpp"

namespace sprego::rewrite {

enum class DiagnosticCode {
    NonSpregoFunction,
    AbsoluteReference,
    MixedReference,
    UnsupportedCriteria,
    VolatileInRewrite,
};

/// Wire name, e.g. `NON_SPREGO_FUNCTION`.
const char* to_string(DiagnosticCode code);

struct Diagnostic {
    DiagnosticCode code;
    lang::Span span;
    std::string message;
    bool rewrite_available = false;
};

enum class RuleId { R1 = 1, R2, R3, R4, R5, R6, R7, R8 };

const char* to_string(RuleId id);
std::optional<RuleId> parse_rule_id(std::string_view text);

/// One applied catalog rule: the baseline call it replaced, the Sprego
/// composite it became, and any documented behavioral divergence.
struct RewritePlan {
    RuleId rule;
    lang::Expr original;
    lang::Expr replacement;
    std::vector<std::string> notes;
};

struct RewriteError {
    lang::Span span;
    std::string reason;
};

/// Column layout of the table a formula runs against. Needed only to
/// rewrite lookups whose range is the table name itself.
struct TableShape {
    std::string name;
    std::vector<std::string> headers;
};

struct RewriteOptions {
    std::optional<TableShape> table;
};

struct RewriteResult {
    lang::Formula formula;
    std::vector<RewritePlan> plans;
    /// Non-empty when criteria could not be expressed (wildcards); the
    /// formula is then returned unchanged.
    std::vector<RewriteError> errors;
    /// Baseline calls left in place, and volatility warnings.
    std::vector<Diagnostic> diagnostics;
};

/// Findings for baseline and unknown function calls, absolute and mixed
/// references, unsupported criteria and volatile IFERROR arguments, ordered by span.
std::vector<Diagnostic> lint(const lang::Expr& expr, const RewriteOptions& options = {});
std::vector<Diagnostic> lint(const lang::Formula& formula, const RewriteOptions& options = {});

/// Applies the R1..R8 catalog bottom-up until no rule fires.
RewriteResult rewrite(const lang::Formula& formula, const RewriteOptions& options = {});

/// True when every call in `expr` belongs to the core or extended set.
bool is_sprego_only(const lang::Expr& expr);

nlohmann::ordered_json to_json(const Diagnostic& d);
nlohmann::ordered_json to_json(const RewritePlan& p);

}  // namespace sprego::rewrite
