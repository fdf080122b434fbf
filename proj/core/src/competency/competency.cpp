#include "sprego/competency/competency.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "sprego/eval/evaluator.hpp"

namespace sprego::competency {

const char* to_string(Group group) {
    switch (group) {
        case Group::ProblemSolving: return "problem-solving";
        case Group::BasicIct: return "basic-ict";
        case Group::Design: return "design";
        case Group::Formulas: return "formulas";
        case Group::Formatting: return "formatting";
    }
    return "?";
}

const char* to_string(Knowledge k) {
    switch (k) {
        case Knowledge::MA: return "MA";
        case Knowledge::DP: return "DP";
        case Knowledge::IS: return "IS";
        case Knowledge::AC: return "AC";
        case Knowledge::ICT: return "ICT";
    }
    return "?";
}

const char* to_string(Level level) { return level == Level::BU ? "BU" : "GU"; }

namespace {

using enum Knowledge;
constexpr auto PS = Group::ProblemSolving;
constexpr auto ICTG = Group::BasicIct;
constexpr auto DES = Group::Design;
constexpr auto FOR = Group::Formulas;
constexpr auto FMT = Group::Formatting;

const std::vector<CompetencyItem>& items() {
    // {id, group, name, input knowledge, BU, GU, evaluable}
    static const std::vector<CompetencyItem> table = {
        {"breaking-down-problems", PS, "Breaking down and researching problems", {MA, DP, IS, AC}, true, true, false},
        {"tracing-errors", PS, "Tracing errors in spreadsheets they build", {MA, ICT, IS, AC}, true, true, false},
        {"error-resistant-formulas", PS, "Building error-resistant formulas", {MA, ICT}, true, true, false},
        {"manual-vs-automatic-calculation", PS, "Understanding manual vs automatic calculation", {ICT, MA, IS, AC}, true, true, false},
        {"recognizing-error-messages", PS, "Recognizing error messages", {ICT, MA, IS, AC}, true, true, false},
        {"data-entering-errors", PS, "Handling data-entering error messages", {ICT, MA, AC}, true, true, false},
        {"formula-entering-errors", PS, "Handling formula-entering error messages", {MA, AC}, true, true, false},
        {"data-driven-errors", PS, "Handling data-driven error messages", {AC}, false, true, false},
        {"recognizing-data-types", PS, "Recognizing data types", {ICT}, true, true, false},
        {"analysing-data-manually", PS, "Analysing data manually", {MA, ICT}, true, true, false},

        {"accessing-saving-files", ICTG, "Accessing and saving files", {ICT}, true, true, false},
        {"reading-entering-data", ICTG, "Reading and entering data", {ICT}, true, true, false},
        {"set-up-printing", ICTG, "Manipulating set up and printing", {ICT}, true, true, false},
        {"naming-files", ICTG, "Naming files", {ICT}, true, true, false},
        {"save-as", ICTG, "Converting files with Save As", {ICT}, true, true, false},
        {"find-replace", ICTG, "Managing find and replace processes", {ICT}, true, true, false},
        {"navigation-shortcuts", ICTG, "Understanding and applying navigation shortcuts", {ICT}, true, true, false},
        {"copy-move-shortcuts", ICTG, "Understanding and applying copy and move shortcuts", {ICT}, true, true, false},
        {"file-management-shortcuts", ICTG, "Understanding and applying file management shortcuts", {ICT}, true, true, false},

        {"designing-layout", DES, "Designing layout", {DP, ICT, AC}, true, true, false},
        {"explaining-calculations", DES, "Explaining calculations they build", {ICT, MA, AC}, true, true, false},

        {item::kBasicArithmetic, FOR, "Understanding and applying basic arithmetic", {MA}, true, true, true},
        {item::kConceptOfFunctions, FOR, "Understanding the concept of functions", {MA, ICT}, true, true, true},
        {item::kNonArrayFunctions, FOR, "Calling non-array-based general purpose functions", {}, true, true, true},
        {"handling-vectors", FOR, "Understanding and handling vectors", {}, true, true, false},
        {item::kVectorOutputArray, FOR, "Building vector output array formulas", {}, true, true, true},
        {item::kOneValueOutputArray, FOR, "Building one value output array formulas", {}, true, true, true},
        {item::kArrayErrorConditionFunctions, FOR, "Calling array-, error-, and condition-based general purpose functions", {}, false, true, true},
        {item::kComposite2To3, FOR, "Building 2 and 3-level composite functions", {}, true, true, true},
        {item::kCompositeMultiLevel, FOR, "Building multi-level composite functions", {}, false, true, true},
        {"precedent-dependent-cells", FOR, "Understanding precedent and dependent cells", {}, true, true, false},

        {"hiding-inserting", FMT, "Understanding and applying hiding, unhiding, deleting, inserting rows, columns, cells", {ICT}, true, true, false},
        {"grouping-merging", FMT, "Understanding and applying grouping, merging", {ICT}, false, true, false},
        {"regular-cell-formatting", FMT, "Understanding and applying regular cell formatting", {ICT}, true, true, false},
    };
    return table;
}

constexpr std::array<std::string_view, 13> kNonArrayFunctionNames = {
    "LEN", "LEFT", "RIGHT", "SEARCH", "SUBSTITUTE", "INT", "ROUND", "SUM", "AVERAGE", "MIN", "MAX", "SMALL", "LARGE"};
constexpr std::array<std::string_view, 8> kArrayErrorConditionNames = {"IF",  "MATCH", "INDEX", "ISERROR",
                                                                       "AND", "OR",    "NOT",   "OFFSET"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& names, std::string_view n) {
    return std::find(names.begin(), names.end(), n) != names.end();
}

bool is_arithmetic(const lang::Expr& e) {
    if (const auto* b = e.as<lang::Binary>()) {
        switch (b->op) {
            case lang::BinaryOp::Pow:
            case lang::BinaryOp::Mul:
            case lang::BinaryOp::Div:
            case lang::BinaryOp::Add:
            case lang::BinaryOp::Sub: return true;
            default: return false;
        }
    }
    if (const auto* u = e.as<lang::Unary>()) return u->op != lang::UnaryOp::Plus;
    return false;
}

/// Tracks the longest call chain and the span of its innermost call.
void deepest_chain(const lang::Expr& e, int depth, int& best, lang::Span& where) {
    const auto* c = e.as<lang::Call>();
    const int here = c != nullptr ? depth + 1 : depth;
    if (c != nullptr && here > best) {
        best = here;
        where = e.span();
    }
    std::visit(lang::Overloaded{
                   [&](const lang::Unary& u) { deepest_chain(*u.operand, here, best, where); },
                   [&](const lang::Binary& b) {
                       deepest_chain(*b.lhs, here, best, where);
                       deepest_chain(*b.rhs, here, best, where);
                   },
                   [&](const lang::Call& call) {
                       for (const auto& a : call.args) deepest_chain(a, here, best, where);
                   },
                   [](const auto&) {},
               },
               e.node());
}

}  // namespace

std::span<const CompetencyItem> framework_items() { return items(); }

const CompetencyItem* find_item(std::string_view id) {
    const auto& all = items();
    auto it = std::find_if(all.begin(), all.end(), [&](const CompetencyItem& i) { return i.id == id; });
    return it == all.end() ? nullptr : &*it;
}

bool CompetencyProfile::has(std::string_view id) const {
    return std::any_of(triggered.begin(), triggered.end(), [&](const Trigger& t) { return t.id == id; });
}

int nesting_depth(const lang::Expr& expr) {
    int best = 0;
    lang::Span where;
    deepest_chain(expr, 0, best, where);
    return best;
}

CompetencyProfile classify(const lang::Formula& formula) {
    std::map<std::string_view, lang::Span> hits;
    auto hit = [&](std::string_view id, lang::Span span) { hits.emplace(id, span); };

    lang::walk(formula.body, [&](const lang::Expr& e) {
        if (is_arithmetic(e)) hit(item::kBasicArithmetic, e.span());
        const auto* c = e.as<lang::Call>();
        if (c == nullptr) return;
        hit(item::kConceptOfFunctions, c->name_span);
        if (contains(kNonArrayFunctionNames, c->name)) hit(item::kNonArrayFunctions, c->name_span);
        if (contains(kArrayErrorConditionNames, c->name)) hit(item::kArrayErrorConditionFunctions, c->name_span);
    });
    if (formula.array_entered) {
        hit(eval::yields_vector(formula.body) ? item::kVectorOutputArray : item::kOneValueOutputArray,
            formula.body.span());
    }

    CompetencyProfile profile;
    lang::Span deepest;
    deepest_chain(formula.body, 0, profile.nesting_depth, deepest);
    if (profile.nesting_depth >= 4) {
        hit(item::kCompositeMultiLevel, deepest);
    } else if (profile.nesting_depth >= 2) {
        hit(item::kComposite2To3, deepest);
    }

    for (const auto& i : items()) {
        auto it = hits.find(i.id);
        if (it == hits.end()) continue;
        profile.triggered.push_back(Trigger{std::string(i.id), it->second});
        if (i.gu_only()) profile.level = Level::GU;
    }
    return profile;
}

Report report(const std::vector<data::Table>& tables, const std::vector<FormulaEntry>& formulas) {
    Report r;
    for (const auto& t : tables) r.tables.push_back({t.name(), t.row_count(), t.column_count()});
    for (const auto& f : formulas) {
        CompetencyProfile p = classify(f.formula);
        for (const auto& t : p.triggered) ++r.histogram[t.id];
        r.workbook_level = std::max(r.workbook_level.value_or(Level::BU), p.level);
        r.formulas.emplace_back(f.source, std::move(p));
    }
    for (const auto& i : items()) {
        if (!i.evaluable) r.not_assessed.push_back(&i);
    }
    return r;
}

nlohmann::ordered_json to_json(const CompetencyProfile& profile) {
    nlohmann::ordered_json j;
    j["level"] = to_string(profile.level);
    j["nesting_depth"] = profile.nesting_depth;
    auto list = nlohmann::ordered_json::array();
    for (const auto& t : profile.triggered) {
        const auto* i = find_item(t.id);
        list.push_back({{"id", t.id},
                        {"name", std::string(i->name)},
                        {"gu_only", i->gu_only()},
                        {"span", {{"start", t.span.start}, {"end", t.span.end}}}});
    }
    j["items"] = std::move(list);
    return j;
}

nlohmann::ordered_json to_json(const Report& report) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    auto tables = nlohmann::ordered_json::array();
    for (const auto& t : report.tables) tables.push_back({{"name", t.name}, {"rows", t.rows}, {"columns", t.columns}});
    j["tables"] = std::move(tables);
    auto formulas = nlohmann::ordered_json::array();
    for (const auto& [source, profile] : report.formulas) {
        nlohmann::ordered_json f;
        f["source"] = source;
        const auto body = to_json(profile);
        for (const auto& [k, v] : body.items()) f[k] = v;
        formulas.push_back(std::move(f));
    }
    j["formulas"] = std::move(formulas);
    nlohmann::ordered_json histogram = nlohmann::ordered_json::object();
    for (const auto& i : items()) {
        auto it = report.histogram.find(std::string(i.id));
        if (it != report.histogram.end()) histogram[std::string(i.id)] = it->second;
    }
    j["workbook"] = {{"level", report.workbook_level ? nlohmann::ordered_json(to_string(*report.workbook_level))
                                                     : nlohmann::ordered_json(nullptr)},
                     {"histogram", std::move(histogram)}};
    auto skipped = nlohmann::ordered_json::array();
    for (const auto* i : report.not_assessed) {
        skipped.push_back({{"id", std::string(i->id)},
                           {"name", std::string(i->name)},
                           {"group", to_string(i->group)},
                           {"status", "not assessed by this tool"}});
    }
    j["not_assessed"] = std::move(skipped);
    return j;
}

std::string to_text(const Report& report) {
    std::ostringstream out;
    for (const auto& t : report.tables) out << "table " << t.name << ": " << t.rows << " rows, " << t.columns << " columns\n";
    for (const auto& [source, profile] : report.formulas) {
        out << source << "\n  level " << to_string(profile.level) << ", depth " << profile.nesting_depth << "\n";
        for (const auto& t : profile.triggered) out << "  - " << find_item(t.id)->name << "\n";
    }
    out << "workbook level: " << (report.workbook_level ? to_string(*report.workbook_level) : "none") << "\n";
    for (const auto& i : items()) {
        auto it = report.histogram.find(std::string(i.id));
        if (it != report.histogram.end()) out << "  " << it->second << "  " << i.name << "\n";
    }
    out << "not assessed by this tool: " << report.not_assessed.size() << " items\n";
    for (const auto* i : report.not_assessed) out << "  - " << i->name << "\n";
    return out.str();
}

}  // namespace sprego::competency
