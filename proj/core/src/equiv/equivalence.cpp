#include "sprego/equiv/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sprego/eval/evaluator.hpp"
#include "sprego/lang/parser.hpp"

namespace sprego::equiv {

using data::Value;

const char* to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::Numeric: return "numeric";
        case GeneratorKind::Text: return "text";
        case GeneratorKind::Logical: return "logical";
        case GeneratorKind::Mixed: return "mixed";
        case GeneratorKind::SortedAscending: return "sorted-ascending";
        case GeneratorKind::SortedDescending: return "sorted-descending";
        case GeneratorKind::WithBlanks: return "with-blanks";
        case GeneratorKind::WithErrors: return "with-errors";
    }
    return "?";
}

Generator Generator::numeric(double lo, double hi, bool integral) {
    Generator g;
    g.lo = lo;
    g.hi = hi;
    g.integral = integral;
    return g;
}

Generator Generator::text(std::string alphabet, std::size_t max_len) {
    Generator g;
    g.kind = GeneratorKind::Text;
    g.alphabet = std::move(alphabet);
    g.max_len = max_len;
    return g;
}

Generator Generator::logical() {
    Generator g;
    g.kind = GeneratorKind::Logical;
    return g;
}

Generator Generator::mixed() {
    Generator g;
    g.kind = GeneratorKind::Mixed;
    return g;
}

Generator Generator::sorted_ascending(double lo, double hi) {
    Generator g = numeric(lo, hi);
    g.kind = GeneratorKind::SortedAscending;
    return g;
}

Generator Generator::sorted_descending(double lo, double hi) {
    Generator g = numeric(lo, hi);
    g.kind = GeneratorKind::SortedDescending;
    return g;
}

Generator Generator::with_blanks(double lo, double hi, double rate) {
    Generator g = numeric(lo, hi);
    g.kind = GeneratorKind::WithBlanks;
    g.rate = rate;
    return g;
}

Generator Generator::with_errors(double lo, double hi, double rate) {
    Generator g = numeric(lo, hi);
    g.kind = GeneratorKind::WithErrors;
    g.rate = rate;
    return g;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Library distributions differ between standard library implementations;
// these keep datasets identical everywhere.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t below(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

double draw_number(const Generator& g, std::mt19937_64& rng) {
    if (g.integral) {
        const auto span = static_cast<std::size_t>(std::floor(g.hi) - std::ceil(g.lo)) + 1;
        return std::ceil(g.lo) + static_cast<double>(below(rng, span));
    }
    return g.lo + (g.hi - g.lo) * unit(rng);
}

std::string draw_text(const Generator& g, std::mt19937_64& rng) {
    const std::size_t len = 1 + below(rng, g.max_len);
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += g.alphabet[below(rng, g.alphabet.size())];
    return s;
}

Value draw(const Generator& g, std::mt19937_64& rng) {
    switch (g.kind) {
        case GeneratorKind::Numeric:
        case GeneratorKind::SortedAscending:
        case GeneratorKind::SortedDescending: return draw_number(g, rng);
        case GeneratorKind::Text: return draw_text(g, rng);
        case GeneratorKind::Logical: return below(rng, 2) == 1;
        case GeneratorKind::Mixed:
            switch (below(rng, 4)) {
                case 0: return draw_number(g, rng);
                case 1: return draw_text(g, rng);
                case 2: return below(rng, 2) == 1;
                default: return data::Blank{};
            }
        case GeneratorKind::WithBlanks:
            if (unit(rng) < g.rate) return data::Blank{};
            return draw_number(g, rng);
        case GeneratorKind::WithErrors:
            if (unit(rng) < g.rate) return data::kAllErrorKinds[below(rng, std::size(data::kAllErrorKinds))];
            return draw_number(g, rng);
    }
    return data::Blank{};
}

void validate(const DatasetSchema& schema) {
    if (schema.rows == 0) throw SchemaError("schema '" + schema.label + "' has zero rows");
    if (schema.columns.empty()) throw SchemaError("schema '" + schema.label + "' has no columns");
    for (const auto& c : schema.columns) {
        const auto& g = c.generator;
        if ((g.kind == GeneratorKind::Text || g.kind == GeneratorKind::Mixed) && (g.alphabet.empty() || g.max_len == 0)) {
            throw SchemaError("column '" + c.name + "' has an empty text alphabet");
        }
        if (g.lo > g.hi || (g.integral && std::ceil(g.lo) > std::floor(g.hi))) {
            throw SchemaError("column '" + c.name + "' has an empty numeric range");
        }
        if (g.rate < 0 || g.rate > 1) throw SchemaError("column '" + c.name + "' has a rate outside [0, 1]");
    }
}

bool numbers_close(double a, double b, const Tolerance& tol) {
    if (a == b) return true;
    const double diff = std::fabs(a - b);
    return diff <= tol.absolute || diff <= tol.relative * std::max(std::fabs(a), std::fabs(b));
}

std::optional<data::RangeView> as_block(const eval::Operand& o) {
    if (const auto* r = std::get_if<data::RangeView>(&o)) return *r;
    return std::nullopt;
}

}  // namespace

data::Table gen_dataset(const DatasetSchema& schema, std::uint64_t seed) {
    validate(schema);
    std::mt19937_64 rng(seed);
    std::vector<data::Column> columns;
    for (const auto& spec : schema.columns) {
        data::Column col{spec.name, {}};
        col.cells.reserve(schema.rows);
        for (std::size_t i = 0; i < schema.rows; ++i) col.cells.push_back(draw(spec.generator, rng));
        if (spec.generator.kind == GeneratorKind::SortedAscending) {
            std::sort(col.cells.begin(), col.cells.end(),
                      [](const Value& a, const Value& b) { return a.number() < b.number(); });
        } else if (spec.generator.kind == GeneratorKind::SortedDescending) {
            std::sort(col.cells.begin(), col.cells.end(),
                      [](const Value& a, const Value& b) { return a.number() > b.number(); });
        }
        columns.push_back(std::move(col));
    }
    return data::Table(schema.table_name, std::move(columns));
}

bool values_match(const Value& a, const Value& b, const Tolerance& tol) {
    if (a.type() != b.type()) return false;
    if (a.is_number()) return numbers_close(a.number(), b.number(), tol);
    return a == b;
}

bool operands_match(const eval::Operand& a, const eval::Operand& b, const Tolerance& tol) {
    auto ra = as_block(a);
    auto rb = as_block(b);
    if (ra && ra->is_single()) return operands_match(ra->cells[0], b, tol);
    if (rb && rb->is_single()) return operands_match(a, rb->cells[0], tol);
    if (!ra && !rb) return values_match(std::get<Value>(a), std::get<Value>(b), tol);
    if (!ra || !rb || ra->rows != rb->rows || ra->cols != rb->cols) return false;
    for (std::size_t i = 0; i < ra->size(); ++i) {
        if (!values_match(ra->cells[i], rb->cells[i], tol)) return false;
    }
    return true;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t schema_index, std::size_t trial) {
    return splitmix64(splitmix64(seed ^ (static_cast<std::uint64_t>(schema_index) << 40)) + trial);
}

std::size_t trial_row(std::uint64_t trial_seed, std::size_t rows) {
    return 1 + static_cast<std::size_t>(splitmix64(trial_seed) % rows);
}

Verdict check_equivalence(const lang::Formula& original, const lang::Formula& rewritten,
                          const std::vector<DatasetSchema>& schemas, std::size_t trials, std::uint64_t seed,
                          const Tolerance& tol) {
    Verdict v;
    v.original = lang::format(original);
    v.rewritten = lang::format(rewritten);
    if (eval::is_volatile(original.body) || eval::is_volatile(rewritten.body)) {
        v.not_run = true;
        v.notes.emplace_back("not run: the formula calls RAND, so the two sides draw different numbers");
        return v;
    }
    for (std::size_t s = 0; s < schemas.size(); ++s) {
        std::vector<Failure> found;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::uint64_t ts = trial_seed(seed, s, t);
            const data::Table table = gen_dataset(schemas[s], ts);
            const std::size_t row = trial_row(ts, schemas[s].rows);
            eval::Operand a = eval::evaluate(original, table, row, ts);
            eval::Operand b = eval::evaluate(rewritten, table, row, ts);
            ++v.trials;
            if (operands_match(a, b, tol)) continue;
            found.push_back(Failure{schemas[s].label, ts, row, std::move(a), std::move(b)});
        }
        std::sort(found.begin(), found.end(), [](const Failure& x, const Failure& y) { return x.seed < y.seed; });
        if (found.size() > kMaxRecordedFailures) found.resize(kMaxRecordedFailures);
        for (auto& f : found) v.failures.push_back(std::move(f));
    }
    return v;
}

std::vector<DatasetSchema> schemas_for(const lang::Formula& original, const lang::Formula& rewritten) {
    std::vector<std::string> names;
    std::size_t columns = 0;
    std::size_t rows = 20;
    auto note_cell = [&](const lang::CellRef& c) {
        columns = std::max<std::size_t>(columns, c.column_index());
        rows = std::max<std::size_t>(rows, c.row);
    };
    for (const auto* f : {&original, &rewritten}) {
        for (const auto& ref : eval::precedents(f->body)) {
            if (const auto* n = std::get_if<lang::NameRef>(&ref)) {
                const auto folded = eval::fold_case(n->name);
                if (std::none_of(names.begin(), names.end(), [&](const std::string& s) { return eval::fold_case(s) == folded; })) {
                    names.push_back(n->name);
                }
            } else if (const auto* c = std::get_if<lang::CellRef>(&ref)) {
                note_cell(*c);
            } else {
                const auto& r = std::get<lang::RangeRef>(ref);
                note_cell(r.start);
                note_cell(r.end);
            }
        }
    }
    std::vector<std::string> headers = names;
    for (std::size_t i = headers.size(); i < std::max<std::size_t>(columns, 1); ++i) {
        headers.push_back("col" + std::to_string(i + 1));
    }
    const std::pair<const char*, Generator> kinds[] = {
        {"numeric", Generator::numeric(0, 10)},        {"with-blanks", Generator::with_blanks(0, 10)},
        {"with-errors", Generator::with_errors(0, 10)}, {"mixed", Generator::mixed()},
        {"text", Generator::text("abc", 2)},            {"sorted-ascending", Generator::sorted_ascending(0, 10)},
    };
    std::vector<DatasetSchema> out;
    for (const auto& [label, gen] : kinds) {
        DatasetSchema s{label, {}, rows, "data"};
        for (const auto& h : headers) s.columns.push_back({h, gen});
        out.push_back(std::move(s));
    }
    return out;
}

rewrite::RewriteOptions options_for(const DatasetSchema& schema) {
    rewrite::TableShape shape{schema.table_name, {}};
    for (const auto& c : schema.columns) shape.headers.push_back(c.name);
    return rewrite::RewriteOptions{shape};
}

std::vector<Verdict> run_suite(std::uint64_t seed, std::size_t trials, std::optional<rewrite::RuleId> only) {
    std::vector<Verdict> out;
    for (const auto& c : rule_suite()) {
        if (only && c.rule != *only) continue;
        const lang::Formula original = lang::parse(c.source);
        const auto result = rewrite::rewrite(original, options_for(c.schemas.front()));
        const bool fired = std::any_of(result.plans.begin(), result.plans.end(),
                                       [&](const rewrite::RewritePlan& p) { return p.rule == c.rule; });
        Verdict v = check_equivalence(original, result.formula, c.schemas, trials, seed);
        v.rule_id = rewrite::to_string(c.rule);
        if (!fired) {
            v.rule_applied = false;
            v.notes.emplace_back("rule did not fire");
        }
        for (const auto& p : result.plans) {
            for (const auto& n : p.notes) {
                if (std::find(v.notes.begin(), v.notes.end(), n) == v.notes.end()) v.notes.push_back(n);
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

nlohmann::ordered_json to_json(const eval::Operand& operand) {
    if (const auto* r = std::get_if<data::RangeView>(&operand)) return data::to_json(*r);
    return data::to_json(std::get<Value>(operand));
}

nlohmann::ordered_json to_json(const Verdict& verdict) {
    nlohmann::ordered_json j;
    j["rule_id"] = verdict.rule_id;
    j["original"] = verdict.original;
    j["rewritten"] = verdict.rewritten;
    j["trials"] = verdict.trials;
    j["pass"] = verdict.pass();
    j["not_run"] = verdict.not_run;
    j["notes"] = verdict.notes;
    auto failures = nlohmann::ordered_json::array();
    for (const auto& f : verdict.failures) {
        nlohmann::ordered_json fj;
        fj["schema"] = f.schema;
        fj["seed"] = f.seed;
        fj["row"] = f.row ? nlohmann::ordered_json(*f.row) : nlohmann::ordered_json(nullptr);
        fj["original"] = to_json(f.original);
        fj["rewritten"] = to_json(f.rewritten);
        failures.push_back(std::move(fj));
    }
    j["failures"] = std::move(failures);
    return j;
}

}  // namespace sprego::equiv
