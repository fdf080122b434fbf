#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sprego/competency/competency.hpp"
#include "sprego/data/table.hpp"
#include "sprego/equiv/equivalence.hpp"
#include "sprego/eval/evaluator.hpp"
#include "sprego/lang/lexer.hpp"
#include "sprego/lang/parser.hpp"
#include "sprego/rewrite/rewrite.hpp"

namespace sprego::cli {

namespace {

using json = nlohmann::ordered_json;

/// Raised inside a subcommand to stop with a status; the message, if any,
/// has already been written.
struct Exit {
    int status;
};

struct Options {
    std::vector<std::string> tables;
    bool no_header = false;
    std::vector<std::string> formulas;
    std::string file;
    std::optional<std::size_t> row;
    std::optional<std::uint64_t> seed;
    std::string format;
    bool all_rules = false;
    std::string rewritten;
    std::size_t trials = equiv::kDefaultTrials;
    std::string rule;
};

class Command {
public:
    Command(const Options& opts, Streams io) : opts_(opts), io_(io) {}

    int parse();
    int eval();
    int lint();
    int rewrite();
    int check();
    int report();
    int profile();
    int repl();

private:
    const Options& opts_;
    Streams io_;

    bool json_output(const char* fallback = "text") const {
        return (opts_.format.empty() ? std::string(fallback) : opts_.format) == "json";
    }

    void emit(const json& j) const { io_.out << j.dump(2) << '\n'; }

    std::uint64_t seed() const {
        if (opts_.seed) return *opts_.seed;
        if (const char* env = std::getenv("SPREGO_SEED")) {
            try {
                return std::stoull(env);
            } catch (const std::exception&) {
                io_.err << "error: SPREGO_SEED is not a non-negative integer\n";
                throw Exit{kExitUsage};
            }
        }
        return 0;
    }

    data::Table load_table(const std::string& path) const {
        data::CsvOptions csv;
        csv.has_header = !opts_.no_header;
        csv.table_name = std::filesystem::path(path).stem().string();
        try {
            return data::load_csv_file(path, csv);
        } catch (const data::CsvError& e) {
            io_.err << "error: " << path << ":" << e.line() << ": " << e.what() << '\n';
        } catch (const std::exception& e) {
            io_.err << "error: " << path << ": " << e.what() << '\n';
        }
        throw Exit{kExitUsage};
    }

    std::vector<data::Table> load_tables() const {
        std::vector<data::Table> out;
        for (const auto& p : opts_.tables) out.push_back(load_table(p));
        return out;
    }

    /// Inline formulas first, then non-empty, non-comment lines of --file.
    std::vector<std::string> sources() const {
        std::vector<std::string> out = opts_.formulas;
        if (!opts_.file.empty()) {
            std::ifstream f(opts_.file);
            if (!f) {
                io_.err << "error: cannot open " << opts_.file << '\n';
                throw Exit{kExitUsage};
            }
            for (std::string line; std::getline(f, line);) {
                if (!line.empty() && line.back() == '\r') line.pop_back();
                const auto first = line.find_first_not_of(" \t");
                if (first == std::string::npos || line[first] == '#') continue;
                out.push_back(line);
            }
        }
        if (out.empty()) {
            io_.err << "error: no formula given (use --formula or --file)\n";
            throw Exit{kExitUsage};
        }
        return out;
    }

    std::optional<lang::Formula> try_parse(const std::string& source) const {
        try {
            return lang::parse(source);
        } catch (const lang::LexError& e) {
            report_syntax_error(source, e.offset(), e.what());
        } catch (const lang::ParseError& e) {
            report_syntax_error(source, e.offset(), e.what());
        }
        return std::nullopt;
    }

    lang::Formula parse_or_exit(const std::string& source) const {
        auto f = try_parse(source);
        if (!f) throw Exit{kExitUsage};
        return *f;
    }

    void report_syntax_error(const std::string& source, std::size_t offset, const char* what) const {
        io_.err << "error: " << what << "\n  " << source << "\n  "
                << std::string(offset, ' ') << "^\n";
    }

    static rewrite::RewriteOptions rewrite_options(const std::vector<data::Table>& tables) {
        rewrite::RewriteOptions o;
        if (!tables.empty()) {
            rewrite::TableShape shape{tables.front().name(), {}};
            for (const auto& c : tables.front().columns()) shape.headers.push_back(c.header);
            o.table = std::move(shape);
        }
        return o;
    }

    void print_operand(const eval::Operand& o) const {
        if (const auto* v = std::get_if<data::Value>(&o)) {
            io_.out << data::to_display(*v) << '\n';
            return;
        }
        const auto& r = std::get<data::RangeView>(o);
        for (std::size_t i = 0; i < r.rows; ++i) {
            for (std::size_t j = 0; j < r.cols; ++j) io_.out << (j ? "\t" : "") << data::to_display(r.at(i, j));
            io_.out << '\n';
        }
    }

    static json span_json(lang::Span s) { return {{"start", s.start}, {"end", s.end}}; }
};

int Command::parse() {
    json results = json::array();
    int status = kExitOk;
    for (const auto& source : sources()) {
        auto f = try_parse(source);
        if (!f) {
            status = kExitUsage;
            continue;
        }
        if (json_output()) {
            results.push_back({{"source", source}, {"canonical", lang::format(*f)}, {"array_entered", f->array_entered}});
        } else {
            io_.out << lang::format(*f) << '\n';
        }
    }
    if (json_output()) emit({{"schema_version", 1}, {"formulas", results}});
    return status;
}

int Command::eval() {
    const auto tables = load_tables();
    const data::Table table = tables.empty() ? data::Table("table", {}) : tables.front();
    const std::uint64_t s = seed();
    json results = json::array();
    for (const auto& source : sources()) {
        const lang::Formula f = parse_or_exit(source);
        json entry{{"source", source}};
        // A plain formula over whole columns with no --row is evaluated once
        // per row, the way a copied-down formula would be.
        if (!f.array_entered && !opts_.row && eval::yields_vector(f.body) && table.row_count() > 0) {
            entry["mode"] = "copied";
            json rows = json::array();
            for (std::size_t r = 1; r <= table.row_count(); ++r) {
                const auto v = eval::evaluate(f, table, r, s);
                if (json_output()) {
                    rows.push_back(equiv::to_json(v));
                } else {
                    io_.out << r << '\t';
                    print_operand(v);
                }
            }
            entry["result"] = std::move(rows);
        } else {
            const auto v = eval::evaluate(f, table, opts_.row, s);
            entry["mode"] = f.array_entered ? "array" : "scalar";
            entry["row"] = opts_.row ? json(*opts_.row) : json(nullptr);
            entry["result"] = equiv::to_json(v);
            if (!json_output()) print_operand(v);
        }
        results.push_back(std::move(entry));
    }
    if (json_output()) emit({{"schema_version", 1}, {"seed", s}, {"results", results}});
    return kExitOk;
}

int Command::lint() {
    const auto options = rewrite_options(load_tables());
    json results = json::array();
    bool findings = false;
    for (const auto& source : sources()) {
        const lang::Formula f = parse_or_exit(source);
        const auto diags = rewrite::lint(f, options);
        findings = findings || !diags.empty();
        json list = json::array();
        for (const auto& d : diags) {
            list.push_back(rewrite::to_json(d));
            if (!json_output()) {
                io_.out << source << ':' << d.span.start << '-' << d.span.end << ": " << rewrite::to_string(d.code)
                        << ": " << d.message << (d.rewrite_available ? " [rewrite available]" : "") << '\n';
            }
        }
        results.push_back({{"source", source}, {"diagnostics", std::move(list)}});
    }
    if (json_output()) emit({{"schema_version", 1}, {"formulas", results}});
    return findings ? kExitFindings : kExitOk;
}

int Command::rewrite() {
    const auto options = rewrite_options(load_tables());
    json results = json::array();
    bool incomplete = false;
    for (const auto& source : sources()) {
        const lang::Formula f = parse_or_exit(source);
        const auto r = rewrite::rewrite(f, options);
        const bool leftover = !r.errors.empty() || std::any_of(r.diagnostics.begin(), r.diagnostics.end(), [](const auto& d) {
            return !d.rewrite_available;
        });
        incomplete = incomplete || leftover;
        if (json_output()) {
            json plans = json::array();
            for (const auto& p : r.plans) plans.push_back(rewrite::to_json(p));
            json errors = json::array();
            for (const auto& e : r.errors) errors.push_back({{"span", span_json(e.span)}, {"reason", e.reason}});
            json diags = json::array();
            for (const auto& d : r.diagnostics) diags.push_back(rewrite::to_json(d));
            results.push_back({{"source", source},
                               {"rewritten", lang::format(r.formula)},
                               {"changed", !r.plans.empty()},
                               {"plans", std::move(plans)},
                               {"errors", std::move(errors)},
                               {"diagnostics", std::move(diags)}});
            continue;
        }
        io_.out << lang::format(r.formula) << '\n';
        for (const auto& p : r.plans) {
            for (const auto& n : p.notes) io_.err << "note: " << rewrite::to_string(p.rule) << ": " << n << '\n';
        }
        for (const auto& e : r.errors) io_.err << "error: offset " << e.span.start << ": " << e.reason << '\n';
        for (const auto& d : r.diagnostics) {
            if (!d.rewrite_available && d.code != rewrite::DiagnosticCode::UnsupportedCriteria) io_.err << "warning: offset " << d.span.start << ": " << d.message << '\n';
        }
    }
    if (json_output()) emit({{"schema_version", 1}, {"formulas", results}});
    return incomplete ? kExitFindings : kExitOk;
}

int Command::check() {
    const std::uint64_t s = seed();
    std::vector<equiv::Verdict> verdicts;
    if (opts_.all_rules) {
        std::optional<rewrite::RuleId> only;
        if (!opts_.rule.empty()) {
            only = rewrite::parse_rule_id(opts_.rule);
            if (!only) {
                io_.err << "error: unknown rule '" << opts_.rule << "' (expected R1..R8)\n";
                throw Exit{kExitUsage};
            }
        }
        verdicts = equiv::run_suite(s, opts_.trials, only);
    } else {
        const auto srcs = sources();
        if (srcs.size() != 1) {
            io_.err << "error: check takes exactly one formula, or --all-rules\n";
            throw Exit{kExitUsage};
        }
        const lang::Formula original = parse_or_exit(srcs.front());
        const auto tables = load_tables();
        lang::Formula rewritten;
        std::string rule_id = "custom";
        if (opts_.rewritten.empty()) {
            const auto r = rewrite::rewrite(original, rewrite_options(tables));
            rewritten = r.formula;
            if (!r.plans.empty()) rule_id = rewrite::to_string(r.plans.front().rule);
        } else {
            rewritten = parse_or_exit(opts_.rewritten);
        }
        auto v = equiv::check_equivalence(original, rewritten, equiv::schemas_for(original, rewritten), opts_.trials, s);
        v.rule_id = rule_id;
        verdicts.push_back(std::move(v));
    }
    const bool pass = std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.pass(); });
    if (json_output("json")) {
        json list = json::array();
        for (const auto& v : verdicts) list.push_back(equiv::to_json(v));
        emit({{"schema_version", 1},
              {"seed", s},
              {"trials_per_schema", opts_.trials},
              {"pass", pass},
              {"verdicts", std::move(list)}});
    } else {
        for (const auto& v : verdicts) {
            io_.out << v.rule_id << ' ' << (v.not_run ? "not-run" : v.pass() ? "pass" : "FAIL") << ' ' << v.trials
                    << " trials  " << v.original << "  ->  " << v.rewritten << '\n';
            for (const auto& f : v.failures) {
                io_.out << "  schema " << f.schema << " seed " << f.seed << " row " << (f.row ? *f.row : 0)
                        << ": original " << equiv::to_json(f.original).dump() << ", rewritten "
                        << equiv::to_json(f.rewritten).dump() << '\n';
            }
        }
    }
    return pass ? kExitOk : kExitFindings;
}

int Command::report() {
    const auto tables = load_tables();
    std::vector<competency::FormulaEntry> entries;
    if (!opts_.formulas.empty() || !opts_.file.empty()) {
        for (const auto& source : sources()) entries.push_back({source, parse_or_exit(source)});
    }
    const auto r = competency::report(tables, entries);
    if (json_output()) {
        emit(competency::to_json(r));
    } else {
        io_.out << competency::to_text(r);
    }
    return kExitOk;
}

int Command::profile() {
    const auto tables = load_tables();
    if (tables.empty()) {
        io_.err << "error: profile needs --table\n";
        throw Exit{kExitUsage};
    }
    json list = json::array();
    for (const auto& t : tables) {
        const auto p = data::profile(t);
        if (json_output()) {
            list.push_back({{"name", t.name()}, {"rows", t.row_count()}, {"columns", data::to_json(p)}});
            continue;
        }
        io_.out << t.name() << ": " << t.row_count() << " rows\n";
        for (const auto& c : p) {
            io_.out << "  " << c.header << "  " << c.dominant << "  ";
            bool first = true;
            for (const auto& [type, n] : c.counts) {
                io_.out << (first ? "" : " ") << data::to_string(type) << '=' << n;
                first = false;
            }
            if (c.min) io_.out << "  min " << data::format_general(*c.min) << " max " << data::format_general(*c.max);
            io_.out << '\n';
        }
    }
    if (json_output()) emit({{"schema_version", 1}, {"tables", std::move(list)}});
    return kExitOk;
}

int Command::repl() {
    std::optional<data::Table> table;
    if (!opts_.tables.empty()) table = load_table(opts_.tables.front());
    std::optional<std::size_t> row = opts_.row;
    const std::uint64_t s = seed();
    const data::Table empty("table", {});

    for (std::string line;;) {
        if (io_.interactive) io_.out << "sprego> " << std::flush;
        if (!std::getline(io_.in, line)) break;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);

        if (line[0] == ':') {
            std::istringstream words(line);
            std::string cmd, arg;
            words >> cmd >> arg;
            if (cmd == ":quit" || cmd == ":q") break;
            if (cmd == ":load" && !arg.empty()) {
                try {
                    table = load_table(arg);
                    io_.out << "loaded " << table->name() << ": " << table->row_count() << " rows, "
                            << table->column_count() << " columns\n";
                } catch (const Exit&) {
                }
            } else if (cmd == ":row") {
                if (arg.empty()) {
                    row.reset();
                    io_.out << "row cleared\n";
                } else {
                    try {
                        row = std::stoul(arg);
                        io_.out << "row " << *row << '\n';
                    } catch (const std::exception&) {
                        io_.err << "error: :row expects a positive integer\n";
                    }
                }
            } else {
                io_.err << "error: unknown command " << cmd << " (try :load file.csv, :row n, :quit)\n";
            }
            continue;
        }

        auto f = try_parse(line);
        if (!f) continue;
        const data::Table& t = table ? *table : empty;
        print_operand(eval::evaluate(*f, t, row, s));
        rewrite::RewriteOptions options;
        if (table) options = rewrite_options({*table});
        for (const auto& d : rewrite::lint(*f, options)) {
            io_.out << "  " << rewrite::to_string(d.code) << ": " << d.message << '\n';
        }
        const auto p = competency::classify(*f);
        io_.out << "  level " << competency::to_string(p.level) << ", depth " << p.nesting_depth << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, Streams io) {
    CLI::App app{"Sprego spreadsheet formula toolkit", "sprego"};
    app.require_subcommand(1);
    Options opts;

    auto add_tables = [&](CLI::App* sub) {
        sub->add_option("--table", opts.tables, "CSV table (repeatable)")->check(CLI::ExistingFile);
        sub->add_flag("--no-header", opts.no_header, "first CSV row is data; headers become C1..Cn");
    };
    auto add_formulas = [&](CLI::App* sub) {
        sub->add_option("--formula", opts.formulas, "formula source (repeatable)");
        sub->add_option("--file", opts.file, "file with one formula per line")->check(CLI::ExistingFile);
    };
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", opts.format, "output format")->check(CLI::IsMember({"text", "json"}));
    };
    auto add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", opts.seed, "RNG seed (default: $SPREGO_SEED, else 0)");
    };
    auto add_row = [&](CLI::App* sub) {
        sub->add_option("--row", opts.row, "data row for scalar evaluation")->check(CLI::PositiveNumber);
    };

    auto* parse = app.add_subcommand("parse", "print the canonical form of formulas");
    add_formulas(parse);
    add_format(parse);

    auto* eval = app.add_subcommand("eval", "evaluate formulas against a table");
    add_tables(eval);
    add_formulas(eval);
    add_row(eval);
    add_seed(eval);
    add_format(eval);

    auto* lint = app.add_subcommand("lint", "report non-Sprego functions and absolute/mixed references");
    add_tables(lint);
    add_formulas(lint);
    add_format(lint);

    auto* rewrite = app.add_subcommand("rewrite", "replace problem-specific functions with Sprego composites");
    add_tables(rewrite);
    add_formulas(rewrite);
    add_format(rewrite);

    auto* check = app.add_subcommand("check", "differential test of a rewrite against its baseline");
    add_tables(check);
    add_formulas(check);
    add_seed(check);
    add_format(check);
    check->add_flag("--all-rules", opts.all_rules, "run the shipped suite for every catalog rule");
    check->add_option("--rule", opts.rule, "with --all-rules, only this rule (R1..R8)");
    check->add_option("--rewritten", opts.rewritten, "rewritten formula to compare (default: rewrite --formula)");
    check->add_option("--trials", opts.trials, "datasets per schema")->check(CLI::PositiveNumber);

    auto* report = app.add_subcommand("report", "competency report for formulas");
    add_tables(report);
    add_formulas(report);
    add_format(report);

    auto* profile = app.add_subcommand("profile", "per-column type census of tables");
    add_tables(profile);
    add_format(profile);

    auto* repl = app.add_subcommand("repl", "interactive formula loop");
    add_tables(repl);
    add_row(repl);
    add_seed(repl);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        io.out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        io.out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        io.err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    Command cmd(opts, io);
    try {
        if (parse->parsed()) return cmd.parse();
        if (eval->parsed()) return cmd.eval();
        if (lint->parsed()) return cmd.lint();
        if (rewrite->parsed()) return cmd.rewrite();
        if (check->parsed()) return cmd.check();
        if (report->parsed()) return cmd.report();
        if (profile->parsed()) return cmd.profile();
        if (repl->parsed()) return cmd.repl();
    } catch (const Exit& e) {
        return e.status;
    }
    return kExitUsage;
}

}  // namespace sprego::cli
