#include <gtest/gtest.h>

#include <random>

#include "sprego/lang/lexer.hpp"
#include "sprego/lang/parser.hpp"
#include "support/generators.hpp"

namespace {

using namespace sprego::lang;

std::vector<TokenKind> kinds(const std::vector<Token>& tokens) {
    std::vector<TokenKind> out;
    for (const auto& t : tokens) out.push_back(t.kind);
    return out;
}

TEST(Lexer, RangeTokens) {
    const auto tokens = tokenize("=A1:B2");
    ASSERT_EQ(tokens.size(), 4u);
    EXPECT_EQ(tokens[0].lexeme, "=");
    EXPECT_EQ(tokens[1].kind, TokenKind::CellRef);
    EXPECT_EQ(tokens[1].lexeme, "A1");
    EXPECT_EQ(tokens[2].lexeme, ":");
    EXPECT_EQ(tokens[3].kind, TokenKind::CellRef);
    EXPECT_EQ(tokens[3].lexeme, "B2");
}

TEST(Lexer, CountifTokens) {
    const auto tokens = tokenize("=COUNTIF(A1:A9,\">5\")");
    EXPECT_EQ(kinds(tokens),
              (std::vector<TokenKind>{TokenKind::Operator, TokenKind::Identifier, TokenKind::Punctuation,
                                      TokenKind::CellRef, TokenKind::Operator, TokenKind::CellRef,
                                      TokenKind::Punctuation, TokenKind::String, TokenKind::Punctuation}));
    EXPECT_EQ(tokens[1].lexeme, "COUNTIF");
    EXPECT_EQ(tokens[7].lexeme, "\">5\"");
}

TEST(Lexer, MalformedNumberIsPositioned) {
    try {
        tokenize("=1..2");
        FAIL() << "expected LexError";
    } catch (const LexError& e) {
        EXPECT_GE(e.offset(), 1u);
        EXPECT_LE(e.offset(), 3u);
    }
}

TEST(Lexer, UnknownCharacterAndUnterminatedString) {
    EXPECT_THROW(tokenize("=A1#"), LexError);
    EXPECT_THROW(tokenize("=\"abc"), LexError);
    EXPECT_THROW(tokenize("=1e"), LexError);
}

TEST(Lexer, LexemesMatchSpans) {
    const std::string src = "= SUM( $A$1 : b7 , \"x\"\"y\" ) & TRUE";
    for (const auto& t : tokenize(src)) {
        EXPECT_FALSE(t.lexeme.empty());
        EXPECT_EQ(src.substr(t.span.start, t.span.end - t.span.start), t.lexeme);
    }
}

TEST(Parser, PrecedenceMulOverAdd) {
    const auto f = parse("=2+3*4");
    EXPECT_EQ(f.body, binary(BinaryOp::Add, number(2), binary(BinaryOp::Mul, number(3), number(4))));
    EXPECT_NE(parse("=2+3*4").body, parse("=(2+3)*4").body);
}

TEST(Parser, UnaryMinusBindsTighterThanPower) {
    const auto f = parse("=-2^2");
    EXPECT_EQ(f.body, binary(BinaryOp::Pow, unary(UnaryOp::Negate, number(2)), number(2)));
}

TEST(Parser, FullPrecedenceLadder) {
    // ":" > unary > % > ^ > */ > +- > & > comparisons
    const auto f = parse("=1<2&3+4*5^-6%");
    const Expr expected = binary(
        BinaryOp::Lt, number(1),
        binary(BinaryOp::Concat, number(2),
               binary(BinaryOp::Add, number(3),
                      binary(BinaryOp::Mul, number(4),
                             binary(BinaryOp::Pow, number(5),
                                    unary(UnaryOp::Percent, unary(UnaryOp::Negate, number(6))))))));
    EXPECT_EQ(f.body, expected);
}

TEST(Parser, LeftAssociative) {
    EXPECT_EQ(parse("=8-4-2").body, binary(BinaryOp::Sub, binary(BinaryOp::Sub, number(8), number(4)), number(2)));
    EXPECT_EQ(parse("=2^3^2").body, binary(BinaryOp::Pow, binary(BinaryOp::Pow, number(2), number(3)), number(2)));
}

TEST(Parser, ArrayEnteredSumIf) {
    const auto f = parse("{=SUM(IF(A1:A9>5,1,0))}");
    EXPECT_TRUE(f.array_entered);
    const Expr range_a = range(RangeRef{make_cell(1, 1), make_cell(1, 9)});
    EXPECT_EQ(f.body, call("SUM", {call("IF", {binary(BinaryOp::Gt, range_a, number(5)), number(1), number(0)})}));
}

TEST(Parser, IndexMatchShape) {
    const auto f = parse("=INDEX(C1:C9,MATCH(E1,A1:A9,0))");
    EXPECT_FALSE(f.array_entered);
    const Expr expected =
        call("INDEX", {range(RangeRef{make_cell(3, 1), make_cell(3, 9)}),
                       call("MATCH", {cell(make_cell(5, 1)), range(RangeRef{make_cell(1, 1), make_cell(1, 9)}), number(0)})});
    EXPECT_EQ(f.body, expected);
}

TEST(Parser, BareExpressionAndOptionalEquals) {
    EXPECT_EQ(parse("1+2").body, parse("=1+2").body);
}

TEST(Parser, AbsoluteFlags) {
    const auto flags = [](const std::string& s) {
        const auto* c = parse(s).body.as<CellRef>();
        return std::pair{c->column_absolute, c->row_absolute};
    };
    EXPECT_EQ(flags("=$A$1"), (std::pair{true, true}));
    EXPECT_EQ(flags("=$A1"), (std::pair{true, false}));
    EXPECT_EQ(flags("=A$1"), (std::pair{false, true}));
    EXPECT_EQ(flags("=A1"), (std::pair{false, false}));
}

TEST(Parser, NamesAndCalls) {
    EXPECT_TRUE(parse("=age").body.is<NameRef>());
    EXPECT_TRUE(parse("=A1").body.is<CellRef>());
    const auto* c = parse("=log10(1)").body.as<Call>();
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->name, "LOG10");  // cell-ref-shaped word followed by "(" is a call
    EXPECT_TRUE(parse("=TRUE").body.is<BoolLit>());
    EXPECT_TRUE(parse("=true()").body.is<Call>());
}

TEST(Parser, RangeIsNormalized) {
    const auto* r = parse("=B9:A1").body.as<RangeRef>();
    ASSERT_NE(r, nullptr);
    EXPECT_EQ(r->start, make_cell(1, 1));
    EXPECT_EQ(r->end, make_cell(2, 9));
}

TEST(Parser, StringEscapes) {
    const auto* t = parse("=\"say \"\"hi\"\"\"").body.as<TextLit>();
    ASSERT_NE(t, nullptr);
    EXPECT_EQ(t->value, "say \"hi\"");
}

TEST(Parser, ErrorsArePositioned) {
    for (const std::string src : {"=", "=SUM(1,", "=(1", "=1+", "={=1}", "{=1", "=1 2", "=A1:"}) {
        try {
            parse(src);
            ADD_FAILURE() << src << " parsed";
        } catch (const ParseError& e) {
            EXPECT_LE(e.offset(), src.size()) << src;
            EXPECT_FALSE(e.expected().empty());
        } catch (const LexError& e) {
            EXPECT_LE(e.offset(), src.size()) << src;
        }
    }
}

TEST(Format, Canonical) {
    EXPECT_EQ(format(parse("= sum( a1 : a3 )")), "=SUM(A1:A3)");
    EXPECT_EQ(format(parse("{=SUM(IF(A1:A9>5,1,0))}")).rfind("{=SUM(IF(", 0), 0u);
    EXPECT_EQ(format(parse("=(2+3)*4")), "=(2+3)*4");
    EXPECT_EQ(format(parse("=2+(3*4)")), "=2+3*4");
    EXPECT_EQ(format(parse("=8-(4-2)")), "=8-(4-2)");
    EXPECT_EQ(format(parse("=\"a\"\"b\"")), "=\"a\"\"b\"");
    EXPECT_EQ(format(parse("=0.1+1E3")), "=0.1+1000");
}

TEST(Format, RoundTripProperty) {
    std::mt19937_64 rng(20240611);
    for (int i = 0; i < 2000; ++i) {
        const std::string src = sprego::testing::random_source(rng);
        const Formula once = parse(src);
        const std::string canonical = format(once);
        const Formula twice = parse(canonical);
        ASSERT_EQ(once, twice) << src << "\n" << canonical;
        ASSERT_EQ(format(twice), canonical);
    }
}

TEST(Format, GeneratedTreesReparseExactly) {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 1000; ++i) {
        const Formula f{sprego::testing::random_expr(rng, 4), i % 3 == 0};
        ASSERT_EQ(parse(format(f)), f) << format(f);
    }
}

TEST(Parser, MalformedInputsNeverCrash) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
        const std::string src = sprego::testing::random_malformed(rng);
        bool threw = false;
        try {
            parse(src);
        } catch (const ParseError& e) {
            threw = true;
            EXPECT_LE(e.offset(), src.size());
        } catch (const LexError& e) {
            threw = true;
            EXPECT_LE(e.offset(), src.size());
        }
        EXPECT_TRUE(threw) << src;
    }
}

}  // namespace
