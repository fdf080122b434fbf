#include "sprego/equiv/equivalence.hpp"

namespace sprego::equiv {

namespace {

using G = Generator;
using rewrite::RuleId;

DatasetSchema schema(std::string label, std::size_t rows, std::vector<ColumnSpec> columns) {
    return DatasetSchema{std::move(label), std::move(columns), rows, "data"};
}

// Columns x, y, z (numbers) and label (text), 40 rows. A1-style cases pass
// `fixed_rows` to skip the schemas of other lengths.
std::vector<DatasetSchema> conditional_schemas(bool fixed_rows = false) {
    const std::size_t rows = 40;
    const auto y = ColumnSpec{"y", G::numeric(0, 10)};
    const auto z = ColumnSpec{"z", G::numeric(-5, 5, false)};
    const auto label = ColumnSpec{"label", G::text("abB", 2)};
    std::vector<DatasetSchema> out = {
        schema("numeric", rows, {{"x", G::numeric(0, 10)}, y, z, label}),
        schema("with-blanks", rows, {{"x", G::with_blanks(0, 10)}, y, {"z", G::with_blanks(-5, 5)}, label}),
        schema("with-errors", rows, {{"x", G::with_errors(0, 10, 0.02)}, y, {"z", G::with_errors(-5, 5, 0.02)}, label}),
        schema("mixed", rows, {{"x", G::mixed()}, y, z, {"label", G::mixed()}}),
        schema("logical", rows, {{"x", G::logical()}, y, z, label}),
        schema("sorted", rows, {{"x", G::sorted_ascending(0, 10)}, y, z, label}),
    };
    if (!fixed_rows) {
        out.push_back(schema("single-row", 1, {{"x", G::numeric(0, 10)}, y, z, label}));
        out.push_back(schema("long", 64, {{"x", G::numeric(0, 10)}, y, z, label}));
    }
    return out;
}

// COUNT and COUNTA datasets avoid the documented divergence classes.
std::vector<DatasetSchema> count_schemas() {
    const auto y = ColumnSpec{"y", G::numeric(0, 10)};
    return {
        schema("numeric", 40, {{"x", G::numeric(0, 10)}, y}),
        schema("with-blanks", 40, {{"x", G::with_blanks(0, 10, 0.5)}, y}),
        schema("text", 40, {{"x", G::text("abc", 3)}, y}),
        schema("all-blank", 40, {{"x", G::with_blanks(0, 10, 1.0)}, y}),
        schema("single-row", 1, {{"x", G::with_blanks(0, 10)}, y}),
    };
}

std::vector<DatasetSchema> count_error_schemas() {
    auto out = count_schemas();
    out.push_back(schema("with-errors", 40, {{"x", G::with_errors(0, 10, 0.3)}, {"y", G::numeric(0, 10)}}));
    return out;
}

std::vector<DatasetSchema> counta_logical_schemas() {
    auto out = count_schemas();
    out.push_back(schema("logical", 40, {{"x", G::logical()}, {"y", G::numeric(0, 10)}}));
    return out;
}

// key (A), val (B), tag (C), probe (D); 30 rows.
std::vector<DatasetSchema> exact_lookup_schemas() {
    const auto probe = ColumnSpec{"probe", G::numeric(0, 25)};
    const auto tag = ColumnSpec{"tag", G::text("xyz", 2)};
    return {
        schema("unsorted", 30, {{"key", G::numeric(0, 20)}, {"val", G::numeric(0, 100)}, tag, probe}),
        schema("blank-values", 30, {{"key", G::numeric(0, 20)}, {"val", G::with_blanks(0, 9)}, tag, probe}),
        schema("error-keys", 30, {{"key", G::with_errors(0, 20, 0.1)}, {"val", G::with_errors(0, 9, 0.2)}, tag, probe}),
        schema("mixed-keys", 30, {{"key", G::mixed()}, {"val", G::numeric(0, 9)}, tag, {"probe", G::mixed()}}),
        schema("sorted", 30, {{"key", G::sorted_ascending(0, 20)}, {"val", G::numeric(0, 9)}, tag, probe}),
    };
}

std::vector<DatasetSchema> text_lookup_schemas() {
    return {
        schema("text", 30, {{"key", G::text("abc", 2)}, {"val", G::numeric(0, 9)}, {"tag", G::text("xyz", 2)},
                            {"probe", G::text("aBc", 2)}}),
    };
}

std::vector<DatasetSchema> approx_lookup_schemas() {
    const auto tag = ColumnSpec{"tag", G::text("xyz", 2)};
    return {
        schema("sorted", 30, {{"key", G::sorted_ascending(0, 50)}, {"val", G::numeric(0, 9)}, tag, {"probe", G::numeric(-5, 55)}}),
        schema("sorted-fractional-probe", 30,
               {{"key", G::sorted_ascending(0, 50)}, {"val", G::with_blanks(0, 9)}, tag, {"probe", G::numeric(-5, 55, false)}}),
        schema("unsorted", 30, {{"key", G::numeric(0, 50)}, {"val", G::numeric(0, 9)}, tag, {"probe", G::numeric(-5, 55)}}),
    };
}

// Five rows of columns A..D plus a probe in E. Columns of the "banded"
// schema occupy disjoint increasing ranges, so row 1 is ascending.
std::vector<DatasetSchema> horizontal_schemas(bool sorted) {
    if (sorted) {
        return {
            schema("banded", 5, {{"a", G::numeric(0, 9)}, {"b", G::numeric(10, 19)}, {"c", G::numeric(20, 29)},
                                 {"d", G::numeric(30, 39)}, {"probe", G::numeric(-5, 45)}}),
            schema("banded-blanks", 5, {{"a", G::numeric(0, 9)}, {"b", G::with_blanks(10, 19)}, {"c", G::numeric(20, 29)},
                                        {"d", G::with_blanks(30, 39)}, {"probe", G::numeric(-5, 45, false)}}),
            schema("unsorted", 5, {{"a", G::numeric(0, 40)}, {"b", G::numeric(0, 40)}, {"c", G::numeric(0, 40)},
                                   {"d", G::numeric(0, 40)}, {"probe", G::numeric(-5, 45)}}),
        };
    }
    return {
        schema("small-alphabet", 5, {{"a", G::numeric(0, 5)}, {"b", G::numeric(0, 5)}, {"c", G::numeric(0, 5)},
                                     {"d", G::numeric(0, 5)}, {"probe", G::numeric(0, 6)}}),
        schema("errors", 5, {{"a", G::with_errors(0, 5)}, {"b", G::with_errors(0, 5)}, {"c", G::mixed()},
                             {"d", G::with_blanks(0, 5)}, {"probe", G::numeric(0, 6)}}),
    };
}

std::vector<DatasetSchema> division_schemas() {
    return {
        schema("zeros", 20, {{"x", G::numeric(-3, 3)}, {"y", G::numeric(0, 2)}}),
        schema("errors", 20, {{"x", G::with_errors(-3, 3, 0.3)}, {"y", G::with_blanks(0, 3)}}),
        schema("mixed", 20, {{"x", G::mixed()}, {"y", G::mixed()}}),
        schema("single-row", 1, {{"x", G::numeric(-3, 3)}, {"y", G::numeric(0, 1)}}),
    };
}

std::vector<RuleCase> build_suite() {
    return {
        {RuleId::R1, "=COUNTIF(x,\">5\")", conditional_schemas()},
        {RuleId::R1, "=COUNTIF(x,\">=0\")", conditional_schemas()},
        {RuleId::R1, "=COUNTIF(x,\">100\")", conditional_schemas()},
        {RuleId::R1, "=COUNTIF(x,4)", conditional_schemas()},
        {RuleId::R1, "=COUNTIF(label,\"b\")", conditional_schemas()},
        {RuleId::R1, "=COUNTIF(A1:A40,\"<>\"&B1)", conditional_schemas(true)},

        {RuleId::R2, "=SUMIF(x,\">5\")", conditional_schemas()},
        {RuleId::R2, "=SUMIF(label,\"a\",z)", conditional_schemas()},
        {RuleId::R2, "=SUMIF(A1:A40,\"<\"&B1,C1:C40)", conditional_schemas(true)},
        {RuleId::R2, "=SUMIF(x,\"<=-1\",y)", conditional_schemas()},

        {RuleId::R3, "=AVERAGEIF(x,\">5\",z)", conditional_schemas()},
        {RuleId::R3, "=AVERAGEIF(x,\">100\")", conditional_schemas()},
        {RuleId::R3, "=AVERAGEIF(label,\"<>a\",x)", conditional_schemas()},

        {RuleId::R4, "=COUNT(x)", count_error_schemas()},
        {RuleId::R4, "=COUNT(A1:A40,B1:B40)", count_error_schemas()},
        {RuleId::R4, "=COUNTA(x)", counta_logical_schemas()},

        {RuleId::R5, "=VLOOKUP(D1,A1:C30,2,FALSE)", exact_lookup_schemas()},
        {RuleId::R5, "=VLOOKUP(D1,A1:C30,3,0)", text_lookup_schemas()},
        {RuleId::R5, "=VLOOKUP(D1,A1:C30,2)", approx_lookup_schemas()},
        {RuleId::R5, "=VLOOKUP(D1,data,2,TRUE)", approx_lookup_schemas()},
        {RuleId::R5, "=VLOOKUP(D1,data,3,FALSE)", exact_lookup_schemas()},

        {RuleId::R6, "=HLOOKUP(E1,A1:D5,3,FALSE)", horizontal_schemas(false)},
        {RuleId::R6, "=HLOOKUP(E1,A1:D5,2)", horizontal_schemas(true)},
        {RuleId::R6, "=HLOOKUP(E1,A1:D1,1,TRUE)", horizontal_schemas(true)},

        {RuleId::R7, "=IFERROR(x/y,0)", division_schemas()},
        {RuleId::R7, "=IFERROR(x/y,\"none\")&\"!\"", division_schemas()},
        {RuleId::R7, "{=SUM(IFERROR(x/y,0))}", division_schemas()},
        {RuleId::R7, "{=IFERROR(x/y,-1)}", division_schemas()},
        {RuleId::R7, "=IFERROR(RAND()/x,0)", division_schemas()},

        {RuleId::R8, "=COUNTIFS(x,\">3\",y,\"<7\")", conditional_schemas()},
        {RuleId::R8, "=COUNTIFS(label,\"a\",x,\">2\",z,\"<0\")", conditional_schemas()},
        {RuleId::R8, "=SUMIFS(z,x,\">=2\",label,\"<>b\")", conditional_schemas()},
        {RuleId::R8, "=COUNTIFS(A1:A40,\">\"&B1,B1:B40,\"<=5\")", conditional_schemas(true)},
    };
}

}  // namespace

const std::vector<RuleCase>& rule_suite() {
    static const std::vector<RuleCase> suite = build_suite();
    return suite;
}

}  // namespace sprego::equiv
