#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "support/printers.hpp"
#include "sprego/data/table.hpp"
#include "sprego/equiv/equivalence.hpp"
#include "sprego/lang/parser.hpp"

namespace {

using namespace sprego::data;
using sprego::lang::make_cell;

RangeView as_view(const Resolved& r) { return std::get<RangeView>(r); }
Value as_value(const Resolved& r) { return std::get<Value>(r); }

TEST(Value, NonFiniteNumbersBecomeNumError) {
    EXPECT_EQ(Value(std::numeric_limits<double>::infinity()), Value(ErrorKind::Num));
    EXPECT_EQ(Value(std::nan("")), Value(ErrorKind::Num));
    EXPECT_TRUE(Value(1.5).is_number());
}

TEST(Value, BlankIsDistinctFromEmptyTextAndZero) {
    EXPECT_NE(Value(), Value(""));
    EXPECT_NE(Value(), Value(0));
    EXPECT_TRUE(Value().is_blank());
}

TEST(Value, ErrorDisplayStrings) {
    EXPECT_STREQ(to_string(ErrorKind::Div0), "#DIV/0!");
    EXPECT_STREQ(to_string(ErrorKind::Value), "#VALUE!");
    EXPECT_STREQ(to_string(ErrorKind::NA), "#N/A");
    EXPECT_STREQ(to_string(ErrorKind::Ref), "#REF!");
    EXPECT_STREQ(to_string(ErrorKind::Name), "#NAME?");
    EXPECT_STREQ(to_string(ErrorKind::Num), "#NUM!");
    for (auto k : kAllErrorKinds) EXPECT_EQ(parse_error_kind(to_string(k)), k);
}

TEST(Value, NumeralsAndGeneralFormat) {
    EXPECT_EQ(parse_numeral("007"), 7.0);
    EXPECT_EQ(parse_numeral("-1.5e2"), -150.0);
    EXPECT_EQ(parse_numeral(".5"), 0.5);
    EXPECT_FALSE(parse_numeral("1,000"));
    EXPECT_FALSE(parse_numeral("abc"));
    EXPECT_FALSE(parse_numeral(""));
    EXPECT_EQ(format_general(6), "6");
    EXPECT_EQ(format_general(0.1 + 0.2), "0.3");
    EXPECT_EQ(to_display(Value(true)), "TRUE");
    EXPECT_EQ(to_display(Value()), "");
}

TEST(Csv, TypingRule) {
    const Table t = load_csv("name,age\nBob,7");
    ASSERT_EQ(t.column_count(), 2u);
    ASSERT_EQ(t.row_count(), 1u);
    EXPECT_EQ(t.columns()[0].header, "name");
    EXPECT_EQ(t.columns()[0].cells[0], Value("Bob"));
    EXPECT_EQ(t.columns()[1].cells[0], Value(7));
}

TEST(Csv, EmptyLineIsBlankCell) {
    const Table t = load_csv("x\n\n");
    ASSERT_EQ(t.row_count(), 1u);
    EXPECT_TRUE(t.columns()[0].cells[0].is_blank());
}

TEST(Csv, LeadingZeroNumeralIsNumber) {
    EXPECT_EQ(load_csv("v\n007").columns()[0].cells[0], Value(7));
}

TEST(Csv, LogicalsGroupedDigitsAndQuotes) {
    const Table t = load_csv("a,b,c,d\ntrue,\"1,000\",\"\",\"say \"\"hi\"\"\"\nFALSE,1,,x\n");
    ASSERT_EQ(t.row_count(), 2u);
    EXPECT_EQ(t.columns()[0].cells[0], Value(true));
    EXPECT_EQ(t.columns()[0].cells[1], Value(false));
    EXPECT_EQ(t.columns()[1].cells[0], Value("1,000"));
    EXPECT_EQ(t.columns()[2].cells[0], Value(""));
    EXPECT_TRUE(t.columns()[2].cells[1].is_blank());
    EXPECT_EQ(t.columns()[3].cells[0], Value("say \"hi\""));
}

TEST(Csv, QuotedNumeralStaysText) {
    EXPECT_EQ(load_csv("v\n\"5\"").columns()[0].cells[0], Value("5"));
}

TEST(Csv, RaggedRowsArePadded) {
    const Table t = load_csv("a,b,c\n1\n1,2,3\r\n");
    ASSERT_EQ(t.row_count(), 2u);
    EXPECT_TRUE(t.columns()[1].cells[0].is_blank());
    EXPECT_TRUE(t.columns()[2].cells[0].is_blank());
    EXPECT_EQ(t.columns()[2].cells[1], Value(3));
}

TEST(Csv, HeaderlessColumnsAreNumbered) {
    CsvOptions opt;
    opt.has_header = false;
    const Table t = load_csv("1,2\n3,4\n", opt);
    ASSERT_EQ(t.column_count(), 2u);
    EXPECT_EQ(t.columns()[0].header, "C1");
    EXPECT_EQ(t.columns()[1].header, "C2");
    EXPECT_EQ(t.row_count(), 2u);
}

TEST(Csv, ErrorsCarryLine) {
    try {
        load_csv("a\n1\n\"open\n");
        FAIL() << "expected CsvError";
    } catch (const CsvError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(load_csv("a\n\xff\xfe\n"), CsvError);
    EXPECT_THROW(load_csv("a,A\n1,2\n"), CsvError);
    EXPECT_THROW(Table("t", {{"a", {1}}, {"A", {2}}}), std::invalid_argument);
    EXPECT_THROW(Table("t", {{"a", {1}}, {"b", {1, 2}}}), std::invalid_argument);
}

TEST(Csv, Deterministic) {
    const std::string bytes = "n,v\n1,a\n2,\"b\"\n,TRUE\n";
    const Table a = load_csv(bytes);
    const Table b = load_csv(bytes);
    EXPECT_EQ(to_json(a), to_json(b));
}

class Resolve : public ::testing::Test {
protected:
    Table t = load_csv("name,age,city\nAnn,7,Rome\nBob,12,Oslo\nCid,5,Lima\n", {true, "people"});
};

TEST_F(Resolve, NameIsWholeColumnCaseInsensitive) {
    const auto r = resolve(t, sprego::lang::NameRef{"AGE"});
    const RangeView v = as_view(r);
    EXPECT_EQ(v.rows, 3u);
    EXPECT_EQ(v.cols, 1u);
    EXPECT_EQ(v.cells, (std::vector<Value>{7, 12, 5}));
}

TEST_F(Resolve, TableNameIsWholeTable) {
    const RangeView v = as_view(resolve(t, sprego::lang::NameRef{"people"}));
    EXPECT_EQ(v.rows, 3u);
    EXPECT_EQ(v.cols, 3u);
}

TEST_F(Resolve, UnknownNameIsNameError) {
    EXPECT_EQ(as_value(resolve(t, sprego::lang::NameRef{"height"})), Value(ErrorKind::Name));
}

TEST_F(Resolve, CellAndRange) {
    EXPECT_EQ(as_view(resolve(t, make_cell(2, 2))).cells, (std::vector<Value>{12}));
    EXPECT_EQ(as_value(resolve(t, make_cell(1, 5))), Value(ErrorKind::Ref));
    EXPECT_EQ(as_value(resolve(t, make_cell(4, 1))), Value(ErrorKind::Ref));
    const RangeView v = as_view(resolve(t, sprego::lang::RangeRef{make_cell(1, 1), make_cell(1, 3)}));
    EXPECT_EQ(v.cells, (std::vector<Value>{"Ann", "Bob", "Cid"}));
    ASSERT_TRUE(v.origin);
    EXPECT_EQ(*v.origin, (CellPosition{1, 1}));
    EXPECT_EQ(as_value(resolve(t, sprego::lang::RangeRef{make_cell(1, 1), make_cell(1, 4)})), Value(ErrorKind::Ref));
}

TEST_F(Resolve, Block) {
    const RangeView v = as_view(resolve_block(t, 2, 2, 2, 2));
    EXPECT_EQ(v.cells, (std::vector<Value>{12, "Oslo", 5, "Lima"}));
    EXPECT_EQ(as_value(resolve_block(t, 0, 1, 1, 1)), Value(ErrorKind::Ref));
    EXPECT_EQ(as_value(resolve_block(t, 3, 3, 2, 1)), Value(ErrorKind::Ref));
}

TEST(Profile, Examples) {
    const Table t("t", {{"n", {1, 2, Value()}}, {"b", {Value(), Value(), Value()}}, {"m", {1, "a", Value()}}});
    const auto p = profile(t);
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p[0].counts.at(ValueType::Number), 2u);
    EXPECT_EQ(p[0].counts.at(ValueType::Blank), 1u);
    EXPECT_EQ(p[0].dominant, "number");
    EXPECT_EQ(p[0].min, 1.0);
    EXPECT_EQ(p[0].max, 2.0);
    EXPECT_EQ(p[1].dominant, "blank");
    EXPECT_FALSE(p[1].min);
    EXPECT_EQ(p[2].counts.at(ValueType::Number), 1u);
    EXPECT_EQ(p[2].counts.at(ValueType::Text), 1u);
    EXPECT_EQ(p[2].dominant, "number");
}

TEST(Profile, CountsPartitionRowsProperty) {
    using sprego::equiv::Generator;
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const std::size_t rows = 1 + rng() % 40;
        const sprego::equiv::DatasetSchema schema{
            "p", {{"a", Generator::mixed()}, {"b", Generator::with_errors(0, 5, 0.3)}, {"c", Generator::with_blanks(0, 5, 0.5)}},
            rows};
        const Table t = sprego::equiv::gen_dataset(schema, rng());
        for (const auto& col : profile(t)) {
            std::size_t total = 0;
            for (const auto& [type, n] : col.counts) total += n;
            EXPECT_EQ(total, rows);
            EXPECT_EQ(col.counts.size(), 5u);
        }
    }
}

TEST(Json, TableRoundTrip) {
    const Table t = load_csv("a,b\n1,x\n,TRUE\n\"\",2.5\n", {true, "demo"});
    const auto j = to_json(t);
    EXPECT_EQ(j["name"], "demo");
    EXPECT_EQ(j["headers"], nlohmann::ordered_json({"a", "b"}));
    EXPECT_EQ(j["rows"].size(), 3u);
    const Table back = table_from_json(nlohmann::json::parse(j.dump()));
    ASSERT_EQ(back.row_count(), t.row_count());
    for (std::size_t c = 0; c < t.column_count(); ++c) EXPECT_EQ(back.columns()[c].cells, t.columns()[c].cells);
}

TEST(Json, ValuesRoundTrip) {
    for (const Value& v : {Value(), Value(3.25), Value("x"), Value(""), Value(false), Value(ErrorKind::NA)}) {
        EXPECT_EQ(value_from_json(nlohmann::json::parse(to_json(v).dump())), v) << to_debug(v);
    }
}

}  // namespace
