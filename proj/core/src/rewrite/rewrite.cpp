#include "sprego/rewrite/rewrite.hpp"

#include <algorithm>
#include <variant>

#include "sprego/eval/criteria.hpp"
#include "sprego/eval/evaluator.hpp"
#include "sprego/eval/functions.hpp"
#include "sprego/lang/parser.hpp"

namespace sprego::rewrite {

using lang::BinaryOp;
using lang::Call;
using lang::Expr;

const char* to_string(DiagnosticCode code) {
    switch (code) {
        case DiagnosticCode::NonSpregoFunction: return "NON_SPREGO_FUNCTION";
        case DiagnosticCode::AbsoluteReference: return "ABSOLUTE_REFERENCE";
        case DiagnosticCode::MixedReference: return "MIXED_REFERENCE";
        case DiagnosticCode::UnsupportedCriteria: return "UNSUPPORTED_CRITERIA";
        case DiagnosticCode::VolatileInRewrite: return "VOLATILE_IN_REWRITE";
    }
    return "?";
}

const char* to_string(RuleId id) {
    static constexpr const char* kNames[] = {"R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8"};
    return kNames[static_cast<int>(id) - 1];
}

std::optional<RuleId> parse_rule_id(std::string_view text) {
    if (text.size() != 2 || (text[0] != 'R' && text[0] != 'r')) return std::nullopt;
    for (int i = 1; i <= 8; ++i) {
        if (text[1] == to_string(static_cast<RuleId>(i))[1]) return static_cast<RuleId>(i);
    }
    return std::nullopt;
}

namespace {

constexpr const char* kCountNote =
    "COUNT: text that reads as a number counts under the rewrite (it survives r+0) but not under COUNT";
constexpr const char* kCountLogicalNote =
    "COUNT: logical cells count under the rewrite (TRUE+0 is a number) but not under COUNT";
constexpr const char* kCountaErrorNote =
    "COUNTA: an error cell makes the rewrite return that error, while COUNTA counts it";
constexpr const char* kCountaEmptyTextNote =
    "COUNTA: empty text (\"\") is not counted by the rewrite but is counted by COUNTA";

/// The rule could not be applied at this call site; `code` says how to report it.
struct Refusal {
    DiagnosticCode code;
    lang::Span span;
    std::string reason;
};

using Outcome = std::variant<RewritePlan, Refusal>;

Expr number_expr(double v) {
    if (v < 0 || std::signbit(v)) return lang::unary(lang::UnaryOp::Negate, lang::number(-v));
    return lang::number(v);
}

bool is_reference(const Expr& e) { return e.is<lang::CellRef>() || e.is<lang::RangeRef>() || e.is<lang::NameRef>(); }

std::optional<BinaryOp> operator_literal(std::string_view s) {
    BinaryOp op = BinaryOp::Eq;
    if (s.empty()) return std::nullopt;
    const auto rest = eval::split_criteria_operator(s, op);
    if (!rest.empty()) return std::nullopt;
    return op;
}

/// Elementwise predicate P(range, criteria) as a comparison expression.
std::variant<Expr, Refusal> predicate(const Expr& range, const Expr& criteria, std::vector<std::string>& notes) {
    if (const auto* t = criteria.as<lang::TextLit>()) {
        const eval::Criteria c = eval::parse_criteria(data::Value(t->value));
        if (eval::has_wildcard(c)) {
            return Refusal{DiagnosticCode::UnsupportedCriteria, criteria.span(),
                           "wildcard criteria (* or ?) have no comparison-operator equivalent"};
        }
        Expr operand = c.operand.is_number() ? number_expr(c.operand.number()) : lang::text(c.operand.text());
        return lang::binary(c.op, range, std::move(operand));
    }
    if (criteria.is<lang::NumberLit>() || criteria.is<lang::BoolLit>()) {
        return lang::binary(BinaryOp::Eq, range, criteria);
    }
    if (const auto* u = criteria.as<lang::Unary>();
        u != nullptr && u->op != lang::UnaryOp::Percent && u->operand->is<lang::NumberLit>()) {
        const double n = u->operand->as<lang::NumberLit>()->value;
        return lang::binary(BinaryOp::Eq, range, number_expr(u->op == lang::UnaryOp::Negate ? -n : n));
    }
    if (is_reference(criteria)) {
        notes.emplace_back("criteria read from a reference are compared as a plain value, not parsed as an operator string");
        return lang::binary(BinaryOp::Eq, range, criteria);
    }
    if (const auto* b = criteria.as<lang::Binary>(); b != nullptr && b->op == BinaryOp::Concat) {
        if (const auto* lhs = b->lhs->as<lang::TextLit>()) {
            if (auto op = operator_literal(lhs->value)) {
                notes.emplace_back("operand joined onto the criteria operator is compared by value; numeral text compares as text");
                return lang::binary(*op, range, *b->rhs);
            }
        }
    }
    return Refusal{DiagnosticCode::UnsupportedCriteria, criteria.span(),
                   "criteria must be a literal, a reference, or an operator string joined with &"};
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> ref_shape(const Expr& e) {
    if (const auto* r = e.as<lang::RangeRef>()) return std::pair{r->rows(), r->cols()};
    if (e.is<lang::CellRef>()) return std::pair{1u, 1u};
    return std::nullopt;
}

/// Ranges of conditional aggregates must line up cell for cell.
std::optional<Refusal> check_same_shape(const Call& c, const std::vector<const Expr*>& ranges, lang::Span span) {
    for (const Expr* r : ranges) {
        if (!is_reference(*r)) {
            return Refusal{DiagnosticCode::NonSpregoFunction, span, c.name + " needs references as its ranges"};
        }
    }
    std::optional<std::pair<std::uint32_t, std::uint32_t>> first;
    for (const Expr* r : ranges) {
        auto shape = ref_shape(*r);
        if (!shape) continue;
        if (!first) {
            first = shape;
        } else if (first->first * first->second != shape->first * shape->second) {
            return Refusal{DiagnosticCode::NonSpregoFunction, span, c.name + " ranges differ in size"};
        }
    }
    const bool any_name = std::any_of(ranges.begin(), ranges.end(), [](const Expr* r) { return r->is<lang::NameRef>(); });
    if (any_name && first && ranges.size() > 1) {
        return Refusal{DiagnosticCode::NonSpregoFunction, span, c.name + " mixes column names with A1 ranges"};
    }
    return std::nullopt;
}

Expr sum_if(Expr cond, Expr then_value) {
    return lang::call("SUM", {lang::call("IF", {std::move(cond), std::move(then_value), lang::number(0)})});
}

Outcome plan(RuleId rule, const Expr& original, Expr replacement, std::vector<std::string> notes) {
    return RewritePlan{rule, original, std::move(replacement), std::move(notes)};
}

Outcome rule_countif(const Expr& e, const Call& c) {
    std::vector<std::string> notes;
    if (auto bad = check_same_shape(c, {&c.args[0]}, e.span())) return *bad;
    auto p = predicate(c.args[0], c.args[1], notes);
    if (auto* r = std::get_if<Refusal>(&p)) return *r;
    return plan(RuleId::R1, e, sum_if(std::get<Expr>(std::move(p)), lang::number(1)), std::move(notes));
}

Outcome rule_sumif(const Expr& e, const Call& c, bool average) {
    std::vector<std::string> notes;
    const Expr& values = c.args.size() > 2 ? c.args[2] : c.args[0];
    if (auto bad = check_same_shape(c, {&c.args[0], &values}, e.span())) return *bad;
    auto p = predicate(c.args[0], c.args[1], notes);
    if (auto* r = std::get_if<Refusal>(&p)) return *r;
    Expr cond = std::get<Expr>(std::move(p));
    Expr total = sum_if(cond, values);
    if (!average) return plan(RuleId::R2, e, std::move(total), std::move(notes));
    notes.emplace_back("no matching rows divides 0 by 0, giving #DIV/0! like the baseline");
    Expr count = sum_if(std::move(cond), lang::number(1));
    return plan(RuleId::R3, e, lang::binary(BinaryOp::Div, std::move(total), std::move(count)), std::move(notes));
}

Outcome rule_count(const Expr& e, const Call& c, bool count_all) {
    std::vector<const Expr*> refs;
    for (const auto& a : c.args) refs.push_back(&a);
    for (const Expr* r : refs) {
        if (!is_reference(*r)) {
            return Refusal{DiagnosticCode::NonSpregoFunction, e.span(), c.name + " needs references as its arguments"};
        }
    }
    std::optional<Expr> total;
    for (const Expr* r : refs) {
        Expr empty = lang::binary(BinaryOp::Eq,
                                  lang::call("LEN", {lang::binary(BinaryOp::Concat, *r, lang::text(""))}),
                                  lang::number(0));
        Expr per_cell = lang::call("IF", {std::move(empty), lang::number(0), lang::number(1)});
        if (!count_all) {
            Expr not_number = lang::call("ISERROR", {lang::binary(BinaryOp::Add, *r, lang::number(0))});
            per_cell = lang::call("IF", {std::move(not_number), lang::number(0), std::move(per_cell)});
        }
        Expr sum = lang::call("SUM", {std::move(per_cell)});
        total = total ? lang::binary(BinaryOp::Add, std::move(*total), std::move(sum)) : std::move(sum);
    }
    std::vector<std::string> notes = count_all ? std::vector<std::string>{kCountaErrorNote, kCountaEmptyTextNote}
                                               : std::vector<std::string>{kCountNote, kCountLogicalNote};
    return plan(RuleId::R4, e, std::move(*total), std::move(notes));
}

/// k-th column (vertical) or row of a lookup range, computed syntactically.
std::optional<Expr> slice(const Expr& range, std::uint32_t k, bool vertical, const RewriteOptions& options) {
    if (const auto* r = range.as<lang::RangeRef>()) {
        lang::RangeRef out = *r;
        if (vertical) {
            const auto letters = lang::column_letters(r->start.column_index() + k - 1);
            out.start.column = letters;
            out.end.column = letters;
        } else {
            out.start.row = r->start.row + k - 1;
            out.end.row = out.start.row;
        }
        out.start.span = {};
        out.end.span = {};
        if (out.start == out.end) return lang::cell(out.start);
        return lang::range(out);
    }
    if (const auto* c = range.as<lang::CellRef>()) {
        if (k != 1) return std::nullopt;
        return lang::cell(*c);
    }
    if (const auto* n = range.as<lang::NameRef>()) {
        if (!vertical || !options.table) return std::nullopt;
        const auto& t = *options.table;
        const auto fold = [](std::string s) { return eval::fold_case(s); };
        for (const auto& h : t.headers) {
            if (fold(h) == fold(n->name)) return k == 1 ? std::optional<Expr>(range) : std::nullopt;
        }
        if (fold(t.name) == fold(n->name) && k >= 1 && k <= t.headers.size()) return lang::name(t.headers[k - 1]);
    }
    return std::nullopt;
}

std::optional<std::uint32_t> lookup_extent(const Expr& range, bool vertical, const RewriteOptions& options) {
    if (const auto* r = range.as<lang::RangeRef>()) return vertical ? r->cols() : r->rows();
    if (range.is<lang::CellRef>()) return 1u;
    if (const auto* n = range.as<lang::NameRef>(); n != nullptr && vertical && options.table) {
        const auto& t = *options.table;
        if (eval::fold_case(t.name) == eval::fold_case(n->name)) return static_cast<std::uint32_t>(t.headers.size());
        return 1u;
    }
    return std::nullopt;
}

Outcome rule_lookup(const Expr& e, const Call& c, bool vertical, const RewriteOptions& options) {
    const RuleId rule = vertical ? RuleId::R5 : RuleId::R6;
    const auto refuse = [&](std::string why) { return Refusal{DiagnosticCode::NonSpregoFunction, e.span(), c.name + " " + why}; };

    const auto* k_lit = c.args[2].as<lang::NumberLit>();
    if (k_lit == nullptr || k_lit->value != std::floor(k_lit->value) || k_lit->value < 1)
        return refuse("needs a positive whole-number literal as its index");
    const auto k = static_cast<std::uint32_t>(k_lit->value);
    const auto extent = lookup_extent(c.args[1], vertical, options);
    if (!extent) return refuse("range must be an A1 range (or the table name when the table layout is known)");
    if (k > *extent) return refuse("index points outside the lookup range");

    double match_type = 1;
    if (c.args.size() > 3) {
        if (const auto* b = c.args[3].as<lang::BoolLit>()) {
            match_type = b->value ? 1 : 0;
        } else if (const auto* n = c.args[3].as<lang::NumberLit>()) {
            match_type = n->value != 0 ? 1 : 0;
        } else {
            return refuse("needs a literal TRUE/FALSE as its match mode");
        }
    }
    auto keys = slice(c.args[1], 1, vertical, options);
    auto values = slice(c.args[1], k, vertical, options);
    if (!keys || !values) return refuse("range columns could not be materialized");

    std::vector<std::string> notes;
    if (match_type == 1) {
        notes.emplace_back(vertical ? "approximate match assumes the first column is in ascending order"
                                    : "approximate match assumes the first row is in ascending order");
    }
    Expr position = lang::call("MATCH", {c.args[0], std::move(*keys), lang::number(match_type)});
    return plan(rule, e, lang::call("INDEX", {std::move(*values), std::move(position)}), std::move(notes));
}

Outcome rule_iferror(const Expr& e, const Call& c) {
    std::vector<std::string> notes;
    if (eval::is_volatile(c.args[0])) {
        notes.emplace_back("the guarded expression calls RAND and is evaluated twice; the two draws can differ");
    }
    Expr replacement = lang::call("IF", {lang::call("ISERROR", {c.args[0]}), c.args[1], c.args[0]});
    return plan(RuleId::R7, e, std::move(replacement), std::move(notes));
}

Outcome rule_ifs(const Expr& e, const Call& c, bool sum) {
    const std::size_t first = sum ? 1 : 0;
    if ((c.args.size() - first) % 2 != 0 || c.args.size() - first < 2) {
        return Refusal{DiagnosticCode::NonSpregoFunction, e.span(), c.name + " needs (range, criteria) pairs"};
    }
    std::vector<const Expr*> ranges;
    if (sum) ranges.push_back(&c.args[0]);
    for (std::size_t i = first; i < c.args.size(); i += 2) ranges.push_back(&c.args[i]);
    if (auto bad = check_same_shape(c, ranges, e.span())) return *bad;

    std::vector<std::string> notes;
    std::vector<Expr> preds;
    for (std::size_t i = first; i < c.args.size(); i += 2) {
        auto p = predicate(c.args[i], c.args[i + 1], notes);
        if (auto* r = std::get_if<Refusal>(&p)) return *r;
        preds.push_back(std::get<Expr>(std::move(p)));
    }
    Expr inner = sum ? c.args[0] : lang::number(1);
    for (auto it = preds.rbegin(); it != preds.rend(); ++it) {
        inner = lang::call("IF", {std::move(*it), std::move(inner), lang::number(0)});
    }
    return plan(RuleId::R8, e, lang::call("SUM", {std::move(inner)}), std::move(notes));
}

/// Applies the catalog rule for a baseline call, or explains why it cannot.
std::optional<Outcome> apply_rule(const Expr& e, const RewriteOptions& options) {
    const auto* c = e.as<Call>();
    if (c == nullptr || !eval::is_baseline_function(c->name)) return std::nullopt;
    const auto* spec = eval::find_function(c->name);
    if (!spec->accepts(c->args.size())) {
        return Refusal{DiagnosticCode::NonSpregoFunction, e.span(), c->name + " has the wrong number of arguments"};
    }
    const std::string& n = c->name;
    if (n == "COUNTIF") return rule_countif(e, *c);
    if (n == "SUMIF") return rule_sumif(e, *c, false);
    if (n == "AVERAGEIF") return rule_sumif(e, *c, true);
    if (n == "COUNT") return rule_count(e, *c, false);
    if (n == "COUNTA") return rule_count(e, *c, true);
    if (n == "VLOOKUP") return rule_lookup(e, *c, true, options);
    if (n == "HLOOKUP") return rule_lookup(e, *c, false, options);
    if (n == "IFERROR") return rule_iferror(e, *c);
    if (n == "COUNTIFS") return rule_ifs(e, *c, false);
    if (n == "SUMIFS") return rule_ifs(e, *c, true);
    return std::nullopt;
}

bool needs_array_entry(RuleId r) { return r != RuleId::R7; }

struct Rewriter {
    const RewriteOptions& options;
    std::vector<RewritePlan> plans;
    std::vector<RewriteError> errors;
    std::vector<Diagnostic> diagnostics;  // refusals, rebuilt on every pass
    std::vector<Diagnostic> warnings;     // volatility, kept across passes

    Expr transform(const Expr& e) {
        Expr out = e;
        if (auto* u = out.as<lang::Unary>()) {
            *u->operand = transform(*u->operand);
        } else if (auto* b = out.as<lang::Binary>()) {
            *b->lhs = transform(*b->lhs);
            *b->rhs = transform(*b->rhs);
        } else if (auto* c = out.as<Call>()) {
            for (auto& a : c->args) a = transform(a);
        }
        auto outcome = apply_rule(out, options);
        if (!outcome) return out;
        if (auto* p = std::get_if<RewritePlan>(&*outcome)) {
            if (eval::is_volatile(p->original) && p->rule == RuleId::R7) {
                warnings.push_back(Diagnostic{DiagnosticCode::VolatileInRewrite, e.span(),
                                                 "IFERROR argument calls RAND; the IF(ISERROR()) form evaluates it twice",
                                                 true});
            }
            Expr replacement = p->replacement;
            plans.push_back(std::move(*p));
            return replacement;
        }
        const auto& refusal = std::get<Refusal>(*outcome);
        if (refusal.code == DiagnosticCode::UnsupportedCriteria) {
            errors.push_back(RewriteError{refusal.span, refusal.reason});
        }
        diagnostics.push_back(Diagnostic{refusal.code, refusal.span, refusal.reason, false});
        return out;
    }
};

void lint_into(const Expr& expr, const RewriteOptions& options, std::vector<Diagnostic>& out) {
    auto ref_diag = [&](const lang::CellRef& c) {
        if (c.is_absolute()) {
            out.push_back({DiagnosticCode::AbsoluteReference, c.span,
                           "absolute reference " + lang::format(lang::cell(c)) + "; array formulas make it unnecessary",
                           false});
        } else if (c.is_mixed()) {
            out.push_back({DiagnosticCode::MixedReference, c.span,
                           "mixed reference " + lang::format(lang::cell(c)) + "; array formulas make it unnecessary",
                           false});
        }
    };
    lang::walk(expr, [&](const Expr& e) {
        if (const auto* c = e.as<lang::CellRef>()) ref_diag(*c);
        if (const auto* r = e.as<lang::RangeRef>()) {
            ref_diag(r->start);
            ref_diag(r->end);
        }
        const auto* call = e.as<Call>();
        if (call == nullptr || eval::is_sprego_function(call->name)) return;
        if (!eval::is_baseline_function(call->name)) {
            out.push_back({DiagnosticCode::NonSpregoFunction, call->name_span,
                           call->name + " is not a Sprego function and has no rewrite", false});
            return;
        }
        auto outcome = apply_rule(e, options);
        const auto* p = outcome ? std::get_if<RewritePlan>(&*outcome) : nullptr;
        std::string message = call->name + " is a problem-specific function";
        if (p != nullptr) {
            message += "; rewrite as " + lang::format(p->replacement);
        } else if (outcome) {
            message += "; " + std::get<Refusal>(*outcome).reason;
        }
        out.push_back({DiagnosticCode::NonSpregoFunction, call->name_span, message, p != nullptr});
        if (outcome) {
            if (const auto* r = std::get_if<Refusal>(&*outcome); r != nullptr && r->code == DiagnosticCode::UnsupportedCriteria) {
                out.push_back({r->code, r->span, r->reason, false});
            }
        }
        if (call->name == "IFERROR" && call->args.size() == 2 && eval::is_volatile(call->args[0])) {
            out.push_back({DiagnosticCode::VolatileInRewrite, e.span(),
                           "IFERROR argument calls RAND; the IF(ISERROR()) form evaluates it twice", p != nullptr});
        }
    });
}

}  // namespace

std::vector<Diagnostic> lint(const lang::Expr& expr, const RewriteOptions& options) {
    std::vector<Diagnostic> out;
    lint_into(expr, options, out);
    std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return a.span.start != b.span.start ? a.span.start < b.span.start : a.span.end < b.span.end;
    });
    return out;
}

std::vector<Diagnostic> lint(const lang::Formula& formula, const RewriteOptions& options) {
    return lint(formula.body, options);
}

RewriteResult rewrite(const lang::Formula& formula, const RewriteOptions& options) {
    Rewriter rw{options, {}, {}, {}, {}};
    lang::Formula current = formula;
    // Rules never emit baseline calls, so a second pass is a no-op; loop anyway
    // so the fixpoint holds by construction.
    for (int pass = 0; pass < 8; ++pass) {
        const std::size_t before = rw.plans.size();
        current.body = rw.transform(current.body);
        if (!rw.errors.empty() || rw.plans.size() == before) break;
        rw.diagnostics.clear();
    }

    rw.diagnostics.insert(rw.diagnostics.end(), rw.warnings.begin(), rw.warnings.end());
    std::stable_sort(rw.diagnostics.begin(), rw.diagnostics.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.span.start < b.span.start; });

    RewriteResult result;
    if (!rw.errors.empty()) {
        result.formula = formula;
        result.errors = std::move(rw.errors);
        result.diagnostics = std::move(rw.diagnostics);
        return result;
    }
    const bool array = std::any_of(rw.plans.begin(), rw.plans.end(),
                                   [](const RewritePlan& p) { return needs_array_entry(p.rule); });
    if (array && !formula.array_entered) {
        current.array_entered = true;
        if (eval::yields_vector(formula.body)) {
            for (auto& p : rw.plans) {
                if (needs_array_entry(p.rule)) {
                    p.notes.emplace_back(
                        "the formula becomes array-entered, so vector references outside this call now evaluate elementwise");
                }
            }
        }
    }
    result.formula = std::move(current);
    result.plans = std::move(rw.plans);
    result.diagnostics = std::move(rw.diagnostics);
    return result;
}

bool is_sprego_only(const lang::Expr& expr) {
    bool ok = true;
    lang::walk(expr, [&](const Expr& e) {
        if (const auto* c = e.as<Call>(); c != nullptr && !eval::is_sprego_function(c->name)) ok = false;
    });
    return ok;
}

nlohmann::ordered_json to_json(const Diagnostic& d) {
    nlohmann::ordered_json j;
    j["code"] = to_string(d.code);
    j["span"] = {{"start", d.span.start}, {"end", d.span.end}};
    j["message"] = d.message;
    j["rewrite_available"] = d.rewrite_available;
    return j;
}

nlohmann::ordered_json to_json(const RewritePlan& p) {
    nlohmann::ordered_json j;
    j["rule_id"] = to_string(p.rule);
    j["original"] = lang::format(p.original);
    j["replacement"] = lang::format(p.replacement);
    j["notes"] = p.notes;
    return j;
}

}  // namespace sprego::rewrite
