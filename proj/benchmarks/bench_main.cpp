#include <benchmark/benchmark.h>

#include "sprego/equiv/equivalence.hpp"
#include "sprego/eval/evaluator.hpp"
#include "sprego/eval/lookup.hpp"
#include "sprego/lang/parser.hpp"
#include "sprego/rewrite/rewrite.hpp"

namespace {

using namespace sprego;

const char* const kFormula = "{=SUM(IF(ISERROR(SEARCH(\"ab\",name)),0,LEN(LEFT(name,2))*ROUND(score/3,1)))}";

data::Table make_table(std::size_t rows) {
    const equiv::DatasetSchema schema{
        "bench", {{"name", equiv::Generator::text("abc", 6)}, {"score", equiv::Generator::with_blanks(0, 100)}}, rows};
    return equiv::gen_dataset(schema, 1);
}

void BM_Parse(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(lang::parse(kFormula));
}
BENCHMARK(BM_Parse);

void BM_Rewrite(benchmark::State& state) {
    const auto f = lang::parse("=SUMIFS(C1:C99,A1:A99,\">5\",B1:B99,\"x\")+VLOOKUP(D1,E1:G99,3,FALSE)");
    for (auto _ : state) benchmark::DoNotOptimize(rewrite::rewrite(f));
}
BENCHMARK(BM_Rewrite);

void BM_ArrayFormula(benchmark::State& state) {
    const auto table = make_table(static_cast<std::size_t>(state.range(0)));
    const auto f = lang::parse(kFormula);
    for (auto _ : state) benchmark::DoNotOptimize(eval::evaluate(f, table));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ArrayFormula)->Range(64, 1 << 16);

void BM_MatchSorted(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<data::Value> cells;
    cells.reserve(n);
    for (std::size_t i = 0; i < n; ++i) cells.emplace_back(static_cast<double>(i));
    const data::RangeView column(n, 1, std::move(cells));
    const data::Value lookup(static_cast<double>(n) / 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval::match_position(lookup, column, eval::MatchType::Ascending));
        benchmark::DoNotOptimize(eval::match_position(lookup, column, eval::MatchType::Exact));
    }
}
BENCHMARK(BM_MatchSorted)->Range(64, 1 << 16);

}  // namespace

BENCHMARK_MAIN();
