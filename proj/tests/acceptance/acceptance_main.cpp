// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "sprego/competency/competency.hpp"
#include "sprego/equiv/equivalence.hpp"
#include "sprego/eval/evaluator.hpp"
#include "sprego/eval/functions.hpp"
#include "sprego/lang/lexer.hpp"
#include "sprego/lang/parser.hpp"
#include "sprego/rewrite/rewrite.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/table1.hpp"

namespace {

using namespace sprego;
using Clock = std::chrono::steady_clock;

// Pinned thresholds.
constexpr std::uint64_t kAc1Seed = 7;
constexpr std::size_t kAc1Trials = 200;
constexpr std::size_t kAc1MaxRows = 64;
constexpr double kAc1Seconds = 60.0;
constexpr double kAc1RelTol = 1e-9;
constexpr std::size_t kAc2MaxLen = 8;
constexpr double kAc2Seconds = 10.0;
constexpr int kAc3Formulas = 100;
constexpr std::size_t kAc3MaxRows = 32;
constexpr std::uint64_t kAc3Seed = 3;
constexpr int kAc6RoundTrips = 1000;
constexpr int kAc6Malformed = 100;
constexpr std::uint64_t kAc6Seed = 6;

struct Result {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Result ac1_rewrite_equivalence() {
    for (const auto& c : equiv::rule_suite()) {
        for (const auto& s : c.schemas) {
            if (s.rows > kAc1MaxRows) return {false, c.source + ": schema " + s.label + " exceeds row limit"};
        }
    }
    if (equiv::Tolerance{}.relative > kAc1RelTol) return {false, "default relative tolerance looser than pinned"};
    const auto t0 = Clock::now();
    const auto verdicts = equiv::run_suite(kAc1Seed, kAc1Trials);
    const double secs = seconds_since(t0);
    std::size_t trials = 0, not_run = 0;
    Result r;
    for (const auto& v : verdicts) {
        trials += v.trials;
        not_run += v.not_run ? 1 : 0;
        if (v.not_run && v.rule_id != "R7") {
            r.pass = false;
            r.detail += " " + v.original + " not run;";
        }
        if (!v.pass()) {
            r.pass = false;
            r.detail += " " + v.original + " failed;";
        }
    }
    if (secs >= kAc1Seconds) r.pass = false;
    std::ostringstream d;
    d << verdicts.size() << " cases, " << trials << " trials, " << not_run << " volatile not run, " << secs << " s"
      << r.detail;
    r.detail = d.str();
    return r;
}

Result ac2_match_oracle() {
    const auto t0 = Clock::now();
    const auto sweep = sprego::testing::sweep_match(kAc2MaxLen);
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << sweep.checked << " checks, " << sweep.discrepancies << " discrepancies, " << secs << " s";
    return {sweep.discrepancies == 0 && sweep.checked > 0 && secs < kAc2Seconds, d.str()};
}

Result ac3_array_vs_copy() {
    std::mt19937_64 rng(kAc3Seed);
    std::size_t cells = 0;
    for (int i = 0; i < kAc3Formulas; ++i) {
        const std::size_t rows = 1 + sprego::testing::pick(rng, kAc3MaxRows);
        const auto table = equiv::gen_dataset(sprego::testing::elementwise_schema(rows), rng());
        const lang::Expr body =
            sprego::testing::random_elementwise(rng, 1 + static_cast<int>(sprego::testing::pick(rng, 4)));
        const auto array = eval::evaluate(body, eval::EvalContext(table, eval::Mode::Array));
        const auto* vec = std::get_if<data::RangeView>(&array);
        const std::vector<data::Value> got = vec ? vec->cells : std::vector<data::Value>{std::get<data::Value>(array)};
        if (got.size() != rows) return {false, lang::format(body) + ": array length differs from row count"};
        for (std::size_t r = 1; r <= rows; ++r) {
            const auto copied = eval::evaluate(body, eval::EvalContext(table, eval::Mode::Scalar, r));
            if (!(copied == eval::Operand(got[r - 1]))) {
                return {false, lang::format(body) + ": row " + std::to_string(r) + " differs"};
            }
            ++cells;
        }
    }
    return {true, std::to_string(kAc3Formulas) + " formulas, " + std::to_string(cells) + " cells equal"};
}

std::string call_source(const eval::FunctionSpec& f) {
    std::string s = "=" + std::string(f.name) + "(";
    for (std::size_t i = 0; i < f.min_args; ++i) s += i == 0 ? "1" : ",1";
    return s + ")";
}

std::size_t count_code(const std::vector<rewrite::Diagnostic>& ds, rewrite::DiagnosticCode code) {
    return static_cast<std::size_t>(std::count_if(ds.begin(), ds.end(), [&](const auto& d) { return d.code == code; }));
}

Result ac4_closure_lint() {
    Result r;
    std::size_t sprego_clean = 0, baseline_flagged = 0, refs_flagged = 0;
    auto lint_one = [&](std::string_view name) {
        const auto* f = eval::find_function(name);
        if (!f) {
            r.pass = false;
            r.detail += " missing " + std::string(name) + ";";
            return std::vector<rewrite::Diagnostic>{};
        }
        return rewrite::lint(lang::parse(call_source(*f)));
    };
    for (const auto& set : {eval::kCoreFunctions, eval::kExtendedFunctions}) {
        for (auto name : set) {
            if (count_code(lint_one(name), rewrite::DiagnosticCode::NonSpregoFunction) == 0) {
                ++sprego_clean;
            } else {
                r.pass = false;
                r.detail += " " + std::string(name) + " flagged;";
            }
        }
    }
    for (auto name : eval::kBaselineFunctions) {
        if (count_code(lint_one(name), rewrite::DiagnosticCode::NonSpregoFunction) == 1) {
            ++baseline_flagged;
        } else {
            r.pass = false;
            r.detail += " " + std::string(name) + " not flagged;";
        }
    }
    const std::pair<const char*, rewrite::DiagnosticCode> refs[] = {
        {"=$A$1", rewrite::DiagnosticCode::AbsoluteReference},
        {"=A$1", rewrite::DiagnosticCode::MixedReference},
        {"=$A1", rewrite::DiagnosticCode::MixedReference},
    };
    for (const auto& [src, code] : refs) {
        if (count_code(rewrite::lint(lang::parse(src)), code) == 1) {
            ++refs_flagged;
        } else {
            r.pass = false;
            r.detail += std::string(" ") + src + " not flagged;";
        }
    }
    r.pass = r.pass && sprego_clean == 24 && baseline_flagged == 10 && refs_flagged == 3;
    r.detail = std::to_string(sprego_clean) + "/24 Sprego clean, " + std::to_string(baseline_flagged) +
               "/10 baseline flagged, " + std::to_string(refs_flagged) + "/3 references flagged" + r.detail;
    return r;
}

Result ac5_competency() {
    using competency::Level;
    const std::pair<const char*, Level> fixtures[] = {
        {"=A1+B1", Level::BU},
        {"{=SUM(IF(A1:A9>5,1,0))}", Level::GU},
        {"=LEFT(RIGHT(SUBSTITUTE(LEN(A1)&\"\",\"1\",\"2\"),2))", Level::GU},
        {"=ROUND(INT(MAX(SUM(A1:A3),1)),0)", Level::GU},
    };
    Result r;
    for (const auto& [src, want] : fixtures) {
        const auto p = competency::classify(lang::parse(src));
        if (p.level != want) {
            r.pass = false;
            r.detail += std::string(" ") + src + " -> " + competency::to_string(p.level) + ";";
        }
    }
    std::vector<sprego::testing::PaperRow> paper;
    try {
        paper = sprego::testing::read_paper_table(SPREGO_PAPER_PATH);
    } catch (const std::exception& e) {
        return {false, e.what()};
    }
    const auto problems = sprego::testing::compare_framework(paper);
    for (const auto& p : problems) r.detail += " " + p + ";";
    r.pass = r.pass && problems.empty() && paper.size() == 34;
    r.detail = "4 fixtures, " + std::to_string(paper.size()) + " table rows compared, " +
               std::to_string(problems.size()) + " mismatches" + r.detail;
    return r;
}

Result ac6_round_trip() {
    std::mt19937_64 rng(kAc6Seed);
    for (int i = 0; i < kAc6RoundTrips; ++i) {
        const std::string src = sprego::testing::random_source(rng);
        try {
            const auto once = lang::parse(src);
            if (!(lang::parse(lang::format(once)) == once)) return {false, "round trip changed " + src};
        } catch (const std::exception& e) {
            return {false, src + ": " + e.what()};
        }
    }
    int positioned = 0;
    for (int i = 0; i < kAc6Malformed; ++i) {
        const std::string src = sprego::testing::random_malformed(rng);
        try {
            lang::parse(src);
            return {false, "accepted malformed " + src};
        } catch (const lang::ParseError& e) {
            positioned += e.offset() <= src.size() ? 1 : 0;
        } catch (const lang::LexError& e) {
            positioned += e.offset() <= src.size() ? 1 : 0;
        }
    }
    return {positioned == kAc6Malformed, std::to_string(kAc6RoundTrips) + " round trips, " + std::to_string(positioned) +
                                             "/" + std::to_string(kAc6Malformed) + " malformed with positions"};
}

Result ac7_determinism() {
    auto once = [] {
        std::istringstream in;
        std::ostringstream out, err;
        const int status = cli::run({"check", "--all-rules", "--seed", "7"}, {in, out, err, false});
        return std::make_pair(status, out.str());
    };
    const auto a = once();
    const auto b = once();
    const bool json = nlohmann::json::accept(a.second);
    return {a.first == 0 && json && a == b, std::to_string(a.second.size()) + " bytes, identical: " +
                                                (a == b ? "yes" : "no") + ", exit " + std::to_string(a.first)};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Result()>> criteria[] = {
        {"AC1 rewrite equivalence", ac1_rewrite_equivalence},
        {"AC2 MATCH oracle", ac2_match_oracle},
        {"AC3 array vs copy", ac3_array_vs_copy},
        {"AC4 Sprego closure lint", ac4_closure_lint},
        {"AC5 competency fixtures", ac5_competency},
        {"AC6 parser round trip", ac6_round_trip},
        {"AC7 determinism", ac7_determinism},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Result r;
        try {
            r = check();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %s: %s\n", r.pass ? "PASS" : "FAIL", name, r.detail.c_str());
        failed += r.pass ? 0 : 1;
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
