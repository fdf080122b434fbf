#include <gtest/gtest.h>

#include <random>

#include "sprego/competency/competency.hpp"
#include "sprego/eval/functions.hpp"
#include "sprego/lang/parser.hpp"
#include "support/generators.hpp"
#include "support/table1.hpp"

namespace {

using namespace sprego;
using namespace sprego::competency;

CompetencyProfile of(const std::string& src) { return classify(lang::parse(src)); }

TEST(Classify, ArithmeticIsBasicUser) {
    const auto p = of("=A1+B1");
    ASSERT_EQ(p.triggered.size(), 1u);
    EXPECT_EQ(p.triggered[0].id, item::kBasicArithmetic);
    EXPECT_EQ(p.level, Level::BU);
    EXPECT_EQ(p.nesting_depth, 0);
}

TEST(Classify, SumIfArrayIsGeneralUser) {
    const auto p = of("{=SUM(IF(A1:A9>5,1,0))}");
    EXPECT_TRUE(p.has(item::kArrayErrorConditionFunctions));
    EXPECT_TRUE(p.has(item::kOneValueOutputArray));
    EXPECT_TRUE(p.has(item::kComposite2To3));
    EXPECT_FALSE(p.has(item::kVectorOutputArray));
    EXPECT_EQ(p.nesting_depth, 2);
    EXPECT_EQ(p.level, Level::GU);
}

TEST(Classify, DepthFourIsMultiLevel) {
    const auto p = of("=LEFT(RIGHT(SUBSTITUTE(LEN(A1)&\"\",\"1\",\"2\"),2))");
    EXPECT_EQ(p.nesting_depth, 4);
    EXPECT_TRUE(p.has(item::kCompositeMultiLevel));
    EXPECT_FALSE(p.has(item::kComposite2To3));
    EXPECT_EQ(p.level, Level::GU);
}

TEST(Classify, OtherTriggers) {
    const auto vec = of("{=A1:A3*2}");
    EXPECT_TRUE(vec.has(item::kVectorOutputArray));
    EXPECT_EQ(vec.level, Level::BU);

    const auto len = of("=LEN(A1)");
    EXPECT_TRUE(len.has(item::kConceptOfFunctions));
    EXPECT_TRUE(len.has(item::kNonArrayFunctions));
    EXPECT_FALSE(len.has(item::kBasicArithmetic));
    EXPECT_EQ(len.nesting_depth, 1);
    EXPECT_EQ(len.level, Level::BU);

    EXPECT_EQ(of("=IF(A1>1,1,0)").level, Level::GU);
    EXPECT_TRUE(of("=-A1").has(item::kBasicArithmetic));
    EXPECT_TRUE(of("=\"a\"&\"b\"").triggered.empty());
    EXPECT_TRUE(of("=A1>1").triggered.empty());
}

TEST(Classify, TriggersCarrySpansInFrameworkOrder) {
    const std::string src = "=1+SUM(IF(A1:A9>5,1,0))";
    const auto p = of(src);
    std::size_t last = 0;
    for (const auto& t : p.triggered) {
        const auto items = framework_items();
        const auto pos = static_cast<std::size_t>(
            std::find_if(items.begin(), items.end(), [&](const auto& i) { return i.id == t.id; }) - items.begin());
        EXPECT_GE(pos, last);
        last = pos;
        EXPECT_LE(t.span.end, src.size());
    }
}

TEST(Depth, ThreeNestedCatalogCalls) {
    const auto catalog = eval::function_catalog();
    std::mt19937_64 rng(31);
    for (int i = 0; i < 300; ++i) {
        const auto name = [&] { return std::string(catalog[rng() % catalog.size()].name); };
        const lang::Expr e = lang::call(name(), {lang::call(name(), {lang::call(name(), {lang::name("x")})})});
        EXPECT_EQ(nesting_depth(e), 3) << lang::format(e);
    }
    EXPECT_EQ(nesting_depth(lang::parse("=1+2*3").body), 0);
    EXPECT_EQ(nesting_depth(lang::parse("=SUM(1)+SUM(MAX(1),2)").body), 2);
}

TEST(Property, LevelMatchesGuOnlyTriggers) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 1000; ++i) {
        const lang::Formula f{sprego::testing::random_expr(rng, 4), i % 3 == 0};
        const auto p = classify(f);
        bool gu_only = false;
        for (const auto& t : p.triggered) {
            const auto* it = find_item(t.id);
            ASSERT_NE(it, nullptr);
            EXPECT_TRUE(it->evaluable) << t.id;
            gu_only = gu_only || it->gu_only();
        }
        EXPECT_EQ(p.level == Level::GU, gu_only) << lang::format(f);

        bool has_call = false;
        lang::walk(f.body, [&](const lang::Expr& e) { has_call = has_call || e.is<lang::Call>(); });
        EXPECT_EQ(p.nesting_depth >= 1, has_call) << lang::format(f);
    }
}

TEST(Property, AddingSubexpressionNeverLowersLevel) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 1000; ++i) {
        const bool array = i % 4 == 0;
        const lang::Expr a = sprego::testing::random_expr(rng, 3);
        const lang::Expr b = sprego::testing::random_expr(rng, 3);
        const auto base = classify({a, array}).level;
        for (const lang::Expr& bigger :
             {lang::binary(lang::BinaryOp::Add, a, b), lang::binary(lang::BinaryOp::Concat, b, a),
              lang::call("SUM", {a, b}), lang::call("IF", {b, a, b}), lang::unary(lang::UnaryOp::Negate, a)}) {
            EXPECT_GE(classify({bigger, array}).level, base) << lang::format(a) << " inside " << lang::format(bigger);
        }
    }
}

TEST(Framework, LevelsAreCumulative) {
    for (const auto& i : framework_items()) {
        if (i.bu_required) EXPECT_TRUE(i.gu_required) << i.id;
    }
}

TEST(Framework, EvaluableRowsAreTheFormulaTriggers) {
    std::vector<std::string_view> evaluable;
    for (const auto& i : framework_items()) {
        if (i.evaluable) {
            EXPECT_EQ(i.group, Group::Formulas) << i.id;
            evaluable.push_back(i.id);
        }
        if (i.group == Group::BasicIct || i.group == Group::Design || i.group == Group::Formatting) {
            EXPECT_FALSE(i.evaluable) << i.id;
        }
    }
    EXPECT_EQ(evaluable, (std::vector<std::string_view>{
                             item::kBasicArithmetic, item::kConceptOfFunctions, item::kNonArrayFunctions,
                             item::kVectorOutputArray, item::kOneValueOutputArray, item::kArrayErrorConditionFunctions,
                             item::kComposite2To3, item::kCompositeMultiLevel}));
}

TEST(Framework, MatchesPaperTable) {
    const auto paper = sprego::testing::read_paper_table(SPREGO_PAPER_PATH);
    EXPECT_EQ(paper.size(), 34u);
    const auto problems = sprego::testing::compare_framework(paper);
    for (const auto& p : problems) ADD_FAILURE() << p;
}

TEST(Framework, SpotChecks) {
    const auto* multi = find_item(item::kCompositeMultiLevel);
    ASSERT_NE(multi, nullptr);
    EXPECT_FALSE(multi->bu_required);
    EXPECT_TRUE(multi->gu_required);
    const auto* cond = find_item(item::kArrayErrorConditionFunctions);
    ASSERT_NE(cond, nullptr);
    EXPECT_TRUE(cond->gu_only());
    EXPECT_TRUE(find_item(item::kComposite2To3)->bu_required);
    const auto* merging = find_item("grouping-merging");
    ASSERT_NE(merging, nullptr);
    EXPECT_TRUE(merging->gu_only());
    EXPECT_EQ(find_item("no-such-item"), nullptr);
}

TEST(Report, EmptyWorkbook) {
    const auto r = report({}, {});
    EXPECT_TRUE(r.formulas.empty());
    EXPECT_FALSE(r.workbook_level);
    std::size_t non_evaluable = 0;
    for (const auto& i : framework_items()) non_evaluable += i.evaluable ? 0 : 1;
    EXPECT_EQ(r.not_assessed.size(), non_evaluable);
    const auto j = to_json(r);
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_TRUE(j["workbook"]["level"].is_null());
    EXPECT_EQ(j["not_assessed"][0]["status"], "not assessed by this tool");
}

TEST(Report, WorkbookLevelIsMax) {
    const auto entry = [](const std::string& s) { return FormulaEntry{s, lang::parse(s)}; };
    EXPECT_EQ(report({}, {entry("=A1+B1")}).workbook_level, Level::BU);
    const auto mixed = report({}, {entry("=A1+B1"), entry("{=SUM(IF(A1:A9>5,1,0))}")});
    EXPECT_EQ(mixed.workbook_level, Level::GU);
    EXPECT_EQ(mixed.histogram.at(std::string(item::kBasicArithmetic)), 1u);
    const auto j = to_json(mixed);
    ASSERT_EQ(j["formulas"].size(), 2u);
    EXPECT_EQ(j["formulas"][0]["source"], "=A1+B1");
    EXPECT_EQ(j["formulas"][0]["level"], "BU");
    EXPECT_EQ(j["formulas"][1]["level"], "GU");
    EXPECT_EQ(j["workbook"]["level"], "GU");
    EXPECT_TRUE(j["formulas"][1]["items"].is_array());
    EXPECT_NE(to_text(mixed).find("workbook level: GU"), std::string::npos);
}

TEST(Report, Tables) {
    const data::Table t("scores", {{"a", {1, 2}}, {"b", {3, 4}}});
    const auto r = report({t}, {});
    ASSERT_EQ(r.tables.size(), 1u);
    EXPECT_EQ(r.tables[0].name, "scores");
    EXPECT_EQ(r.tables[0].rows, 2u);
    EXPECT_EQ(r.tables[0].columns, 2u);
}

}  // namespace
