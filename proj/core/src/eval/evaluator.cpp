#include "sprego/eval/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <unordered_map>

#include "sprego/eval/criteria.hpp"
#include "sprego/eval/functions.hpp"
#include "sprego/eval/lookup.hpp"
#include "sprego/lang/parser.hpp"

namespace sprego::eval {

namespace {

using data::ValueType;
using lang::BinaryOp;
using lang::Expr;
using lang::UnaryOp;

using Args = std::vector<Operand>;

bool is_array(const Operand& o) {
    const auto* r = std::get_if<RangeView>(&o);
    return r != nullptr && !r->is_single();
}

/// Value of a non-array operand (a plain value or a 1x1 block).
Value scalar_of(const Operand& o) {
    if (const auto* v = std::get_if<Value>(&o)) return *v;
    const auto& r = std::get<RangeView>(o);
    if (r.is_single()) return r.cells.front();
    return ErrorKind::Value;
}

RangeView block_of(const Operand& o) {
    if (const auto* r = std::get_if<RangeView>(&o)) return *r;
    return RangeView(1, 1, {std::get<Value>(o)});
}

Operand from_resolved(data::Resolved r) {
    if (auto* v = std::get_if<RangeView>(&r)) return std::move(*v);
    return std::get<Value>(r);
}

/// Truncates a numeric argument toward zero; errors and non-numbers pass back in `err`.
std::optional<std::int64_t> integer_arg(const Value& v, Value& err) {
    Value n = to_number(v);
    if (n.is_error()) {
        err = n;
        return std::nullopt;
    }
    const double t = std::trunc(n.number());
    if (t > 1e15 || t < -1e15) {
        err = ErrorKind::Num;
        return std::nullopt;
    }
    return static_cast<std::int64_t>(t);
}

class Evaluator;
using Impl = Operand (*)(const Args& args, Evaluator& ev);

class Evaluator {
public:
    explicit Evaluator(const EvalContext& ctx) : ctx_(ctx), rng_(ctx.rng_seed) {}

    Operand run(const Expr& e) {
        Operand out = eval(e);
        if (ctx_.mode == Mode::Scalar) return intersect(out, ctx_.current_row);
        if (auto* r = std::get_if<RangeView>(&out); r != nullptr && r->is_single()) return r->cells.front();
        return out;
    }

    const data::Table& table() const { return ctx_.table.get(); }
    std::optional<std::size_t> current_row() const { return ctx_.current_row; }

    double rand() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    Operand eval(const Expr& e);

    /// Maps `fn` over the positions flagged in `lifted`; other positions are
    /// handed to `fn` unchanged.
    template <typename Fn>
    Operand lift(const Args& args, const std::vector<bool>& lifted, Fn&& fn) {
        Args call_args = args;
        if (ctx_.mode == Mode::Scalar) {
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (lifted[i]) call_args[i] = intersect(args[i], ctx_.current_row);
            }
            return fn(call_args);
        }

        const RangeView* shape = nullptr;
        bool mismatch = false;
        std::size_t max_rows = 1;
        std::size_t max_cols = 1;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (!lifted[i] || !is_array(args[i])) continue;
            const auto& r = std::get<RangeView>(args[i]);
            max_rows = std::max(max_rows, r.rows);
            max_cols = std::max(max_cols, r.cols);
            if (shape == nullptr) {
                shape = &r;
            } else if (!(r.rows == shape->rows && r.cols == shape->cols) &&
                       !(r.is_vector() && shape->is_vector() && r.size() == shape->size())) {
                mismatch = true;
            }
        }
        if (shape == nullptr) {
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (lifted[i]) call_args[i] = scalar_of(args[i]);
            }
            return fn(call_args);
        }
        if (mismatch) {
            return RangeView(max_rows, max_cols, std::vector<Value>(max_rows * max_cols, Value(ErrorKind::Value)));
        }

        const RangeView out_shape = *shape;
        std::vector<Value> cells;
        cells.reserve(out_shape.size());
        for (std::size_t k = 0; k < out_shape.size(); ++k) {
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (!lifted[i]) continue;
                call_args[i] = is_array(args[i]) ? std::get<RangeView>(args[i]).cells[k] : scalar_of(args[i]);
            }
            cells.push_back(scalar_of(fn(call_args)));
        }
        return RangeView(out_shape.rows, out_shape.cols, std::move(cells));
    }

private:
    Operand eval_call(const lang::Call& c);
    Operand eval_if(const lang::Call& c);

    const EvalContext& ctx_;
    std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// operators

Value arithmetic(BinaryOp op, const Value& a_in, const Value& b_in) {
    const Value a = to_number(a_in);
    if (a.is_error()) return a;
    const Value b = to_number(b_in);
    if (b.is_error()) return b;
    const double x = a.number();
    const double y = b.number();
    switch (op) {
        case BinaryOp::Add: return x + y;
        case BinaryOp::Sub: return x - y;
        case BinaryOp::Mul: return x * y;
        case BinaryOp::Div:
            if (y == 0.0) return ErrorKind::Div0;
            return x / y;
        case BinaryOp::Pow:
            if (x == 0.0 && y == 0.0) return ErrorKind::Num;
            if (x == 0.0 && y < 0.0) return ErrorKind::Div0;
            return std::pow(x, y);
        default:
            return ErrorKind::Value;
    }
}

Value binary_value(BinaryOp op, const Value& a, const Value& b) {
    if (lang::is_comparison(op)) return compare_op(op, a, b);
    if (op == BinaryOp::Concat) {
        const Value x = to_text(a);
        if (x.is_error()) return x;
        const Value y = to_text(b);
        if (y.is_error()) return y;
        return x.text() + y.text();
    }
    return arithmetic(op, a, b);
}

Value unary_value(UnaryOp op, const Value& v) {
    if (op == UnaryOp::Plus) return v;
    const Value n = to_number(v);
    if (n.is_error()) return n;
    return op == UnaryOp::Negate ? -n.number() : n.number() / 100.0;
}

// ---------------------------------------------------------------------------
// aggregation helpers

/// Collects numbers for SUM-like functions. Blocks contribute only their
/// number cells; direct values are coerced. Returns the first error found.
std::optional<Value> collect_numbers(const Args& args, std::vector<double>& out) {
    for (const auto& a : args) {
        if (const auto* r = std::get_if<RangeView>(&a)) {
            for (const auto& c : r->cells) {
                if (c.is_error()) return c;
                if (c.is_number()) out.push_back(c.number());
            }
        } else {
            const auto& v = std::get<Value>(a);
            if (v.is_blank()) continue;
            Value n = to_number(v);
            if (n.is_error()) return n;
            out.push_back(n.number());
        }
    }
    return std::nullopt;
}

Operand fn_sum(const Args& args, Evaluator&) {
    std::vector<double> xs;
    if (auto err = collect_numbers(args, xs)) return *err;
    double s = 0.0;
    for (double x : xs) s += x;
    return Value(s);
}

Operand fn_average(const Args& args, Evaluator&) {
    std::vector<double> xs;
    if (auto err = collect_numbers(args, xs)) return *err;
    if (xs.empty()) return Value(ErrorKind::Div0);
    double s = 0.0;
    for (double x : xs) s += x;
    return Value(s / static_cast<double>(xs.size()));
}

Operand fn_min(const Args& args, Evaluator&) {
    std::vector<double> xs;
    if (auto err = collect_numbers(args, xs)) return *err;
    if (xs.empty()) return Value(0.0);
    return Value(*std::min_element(xs.begin(), xs.end()));
}

Operand fn_max(const Args& args, Evaluator&) {
    std::vector<double> xs;
    if (auto err = collect_numbers(args, xs)) return *err;
    if (xs.empty()) return Value(0.0);
    return Value(*std::max_element(xs.begin(), xs.end()));
}

Operand nth_value(const Args& args, bool largest) {
    std::vector<double> xs;
    if (auto err = collect_numbers({args[0]}, xs)) return *err;
    Value err;
    auto k = integer_arg(std::get<Value>(args[1]), err);
    if (!k) return err;
    if (*k < 1 || static_cast<std::size_t>(*k) > xs.size()) return Value(ErrorKind::Num);
    std::sort(xs.begin(), xs.end());
    const auto idx = static_cast<std::size_t>(*k - 1);
    return Value(largest ? xs[xs.size() - 1 - idx] : xs[idx]);
}

Operand fn_small(const Args& args, Evaluator&) { return nth_value(args, false); }
Operand fn_large(const Args& args, Evaluator&) { return nth_value(args, true); }

Operand logical_fold(const Args& args, bool is_and) {
    bool any = false;
    bool acc = is_and;
    auto take = [&](const Value& v) -> std::optional<Value> {
        if (v.is_blank()) return std::nullopt;
        Value b = to_logical(v);
        if (b.is_error()) return b;
        any = true;
        acc = is_and ? (acc && b.logical()) : (acc || b.logical());
        return std::nullopt;
    };
    for (const auto& a : args) {
        if (const auto* r = std::get_if<RangeView>(&a)) {
            for (const auto& c : r->cells) {
                if (auto err = take(c)) return *err;
            }
        } else if (auto err = take(std::get<Value>(a))) {
            return *err;
        }
    }
    if (!any) return Value(ErrorKind::Value);
    return Value(acc);
}

Operand fn_and(const Args& args, Evaluator&) { return logical_fold(args, true); }
Operand fn_or(const Args& args, Evaluator&) { return logical_fold(args, false); }

// ---------------------------------------------------------------------------
// text

Operand fn_len(const Args& args, Evaluator&) {
    Value t = to_text(std::get<Value>(args[0]));
    if (t.is_error()) return t;
    return Value(static_cast<double>(char_length(t.text())));
}

Operand take_side(const Args& args, bool left) {
    Value t = to_text(std::get<Value>(args[0]));
    if (t.is_error()) return t;
    std::int64_t n = 1;
    if (args.size() > 1) {
        Value err;
        auto k = integer_arg(std::get<Value>(args[1]), err);
        if (!k) return err;
        if (*k < 0) return Value(ErrorKind::Value);
        n = *k;
    }
    const auto chars = decode_utf8(t.text());
    const auto count = std::min<std::size_t>(chars.size(), static_cast<std::size_t>(n));
    const auto piece = left ? std::u32string_view(chars).substr(0, count)
                            : std::u32string_view(chars).substr(chars.size() - count);
    return Value(encode_utf8(piece));
}

Operand fn_left(const Args& args, Evaluator&) { return take_side(args, true); }
Operand fn_right(const Args& args, Evaluator&) { return take_side(args, false); }

Operand fn_search(const Args& args, Evaluator&) {
    Value needle = to_text(std::get<Value>(args[0]));
    if (needle.is_error()) return needle;
    Value hay = to_text(std::get<Value>(args[1]));
    if (hay.is_error()) return hay;
    std::int64_t start = 1;
    if (args.size() > 2) {
        Value err;
        auto s = integer_arg(std::get<Value>(args[2]), err);
        if (!s) return err;
        start = *s;
    }
    return search_position(needle.text(), hay.text(), start);
}

Operand fn_substitute(const Args& args, Evaluator&) {
    Value parts[3];
    for (int i = 0; i < 3; ++i) {
        parts[i] = to_text(std::get<Value>(args[static_cast<std::size_t>(i)]));
        if (parts[i].is_error()) return parts[i];
    }
    std::string s = parts[0].text();
    const std::string& from = parts[1].text();
    const std::string& to = parts[2].text();
    std::optional<std::int64_t> instance;
    if (args.size() > 3) {
        Value err;
        instance = integer_arg(std::get<Value>(args[3]), err);
        if (!instance) return err;
        if (*instance < 1) return Value(ErrorKind::Value);
    }
    if (from.empty()) return Value(s);
    std::string out;
    std::size_t pos = 0;
    std::int64_t seen = 0;
    while (true) {
        const auto hit = s.find(from, pos);
        if (hit == std::string::npos) break;
        ++seen;
        out.append(s, pos, hit - pos);
        out += (!instance || seen == *instance) ? to : from;
        pos = hit + from.size();
    }
    out.append(s, pos, std::string::npos);
    return Value(out);
}

// ---------------------------------------------------------------------------
// conditions, errors, maths

Operand fn_iserror(const Args& args, Evaluator&) { return Value(std::get<Value>(args[0]).is_error()); }

Operand fn_iferror(const Args& args, Evaluator&) {
    const auto& x = std::get<Value>(args[0]);
    return x.is_error() ? std::get<Value>(args[1]) : x;
}

Operand fn_not(const Args& args, Evaluator&) {
    Value b = to_logical(std::get<Value>(args[0]));
    if (b.is_error()) return b;
    return Value(!b.logical());
}

Operand fn_int(const Args& args, Evaluator&) {
    Value n = to_number(std::get<Value>(args[0]));
    if (n.is_error()) return n;
    return Value(std::floor(n.number()));
}

Operand fn_round(const Args& args, Evaluator&) {
    Value n = to_number(std::get<Value>(args[0]));
    if (n.is_error()) return n;
    Value err;
    auto digits = integer_arg(std::get<Value>(args[1]), err);
    if (!digits) return err;
    const double x = n.number();
    if (*digits > 15) return Value(x);
    if (*digits < -15) return Value(0.0);
    const double factor = std::pow(10.0, static_cast<double>(*digits));
    // Trim binary noise to 15 significant digits first, so 1.005*100 rounds as 100.5.
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", x * factor);
    return Value(std::round(std::strtod(buf, nullptr)) / factor);  // half away from zero
}

Operand fn_rand(const Args&, Evaluator& ev) { return Value(ev.rand()); }

// ---------------------------------------------------------------------------
// lookup and references

Operand fn_match(const Args& args, Evaluator&) {
    MatchType type = MatchType::Ascending;
    if (args.size() > 2) {
        Value t = to_number(std::get<Value>(args[2]));
        if (t.is_error()) return t;
        type = t.number() > 0 ? MatchType::Ascending : t.number() < 0 ? MatchType::Descending : MatchType::Exact;
    }
    return match_position(std::get<Value>(args[0]), block_of(args[1]), type);
}

Operand fn_index(const Args& args, Evaluator&) {
    Value err;
    auto row = integer_arg(std::get<Value>(args[1]), err);
    if (!row) return err;
    std::optional<std::int64_t> col;
    if (args.size() > 2) {
        col = integer_arg(std::get<Value>(args[2]), err);
        if (!col) return err;
    }
    return index_select(block_of(args[0]), *row, col);
}

Operand lookup(const Args& args, bool vertical) {
    const RangeView table = block_of(args[1]);
    Value err;
    auto k = integer_arg(std::get<Value>(args[2]), err);
    if (!k) return err;
    if (*k < 1) return Value(ErrorKind::Value);
    const std::size_t span = vertical ? table.cols : table.rows;
    if (static_cast<std::size_t>(*k) > span) return Value(ErrorKind::Ref);

    bool approximate = true;
    if (args.size() > 3) {
        Value b = to_logical(std::get<Value>(args[3]));
        if (b.is_error()) return b;
        approximate = b.logical();
    }
    std::vector<Value> keys;
    const std::size_t n = vertical ? table.rows : table.cols;
    for (std::size_t i = 0; i < n; ++i) keys.push_back(vertical ? table.at(i, 0) : table.at(0, i));
    Value pos = match_position(std::get<Value>(args[0]), RangeView::column(std::move(keys)),
                               approximate ? MatchType::Ascending : MatchType::Exact);
    if (pos.is_error()) return pos;
    const auto i = static_cast<std::size_t>(pos.number()) - 1;
    const auto j = static_cast<std::size_t>(*k - 1);
    return vertical ? table.at(i, j) : table.at(j, i);
}

Operand fn_vlookup(const Args& args, Evaluator&) { return lookup(args, true); }
Operand fn_hlookup(const Args& args, Evaluator&) { return lookup(args, false); }

Operand fn_offset(const Args& args, Evaluator& ev) {
    const auto* ref = std::get_if<RangeView>(&args[0]);
    if (ref == nullptr) {
        const auto& v = std::get<Value>(args[0]);
        return v.is_error() ? v : Value(ErrorKind::Value);
    }
    if (!ref->origin) return Value(ErrorKind::Value);
    Value err;
    std::int64_t dims[4] = {0, 0, static_cast<std::int64_t>(ref->rows), static_cast<std::int64_t>(ref->cols)};
    for (std::size_t i = 1; i < args.size(); ++i) {
        auto d = integer_arg(std::get<Value>(args[i]), err);
        if (!d) return err;
        dims[i - 1] = *d;
    }
    return from_resolved(data::resolve_block(ev.table(), ref->origin->column + dims[1], ref->origin->row + dims[0],
                                             dims[3], dims[2]));
}

Operand position_vector(const Args& args, Evaluator& ev, bool rows) {
    if (args.empty()) {
        if (rows && ev.current_row()) return Value(static_cast<double>(*ev.current_row()));
        return Value(ErrorKind::Value);
    }
    const auto* ref = std::get_if<RangeView>(&args[0]);
    if (ref == nullptr) {
        const auto& v = std::get<Value>(args[0]);
        return v.is_error() ? v : Value(ErrorKind::Value);
    }
    if (!ref->origin) return Value(ErrorKind::Value);
    const std::size_t count = rows ? ref->rows : ref->cols;
    const std::uint32_t first = rows ? ref->origin->row : ref->origin->column;
    if (count == 1) return Value(static_cast<double>(first));
    std::vector<Value> cells;
    for (std::size_t i = 0; i < count; ++i) cells.emplace_back(static_cast<double>(first + i));
    return rows ? RangeView(count, 1, std::move(cells)) : RangeView(1, count, std::move(cells));
}

Operand fn_row(const Args& args, Evaluator& ev) { return position_vector(args, ev, true); }
Operand fn_column(const Args& args, Evaluator& ev) { return position_vector(args, ev, false); }

// ---------------------------------------------------------------------------
// problem-specific baselines

Operand fn_count(const Args& args, Evaluator&) {
    double n = 0;
    for (const auto& a : args) {
        if (const auto* r = std::get_if<RangeView>(&a)) {
            for (const auto& c : r->cells) n += c.is_number() ? 1 : 0;
        } else {
            n += std::get<Value>(a).is_number() ? 1 : 0;
        }
    }
    return Value(n);
}

Operand fn_counta(const Args& args, Evaluator&) {
    double n = 0;
    for (const auto& a : args) {
        for (const auto& c : block_of(a).cells) n += c.is_blank() ? 0 : 1;
    }
    return Value(n);
}

/// One (range, criteria) pair of a conditional aggregate.
struct Condition {
    RangeView range;
    Criteria criteria;
};

/// Walks rows in order applying every condition in turn, stopping at the
/// first condition that is false. Errors from compared cells end the scan,
/// mirroring the order in which nested IF formulas surface them.
/// `on_match(i)` may return an error to stop the scan as well.
template <typename OnMatch>
std::optional<Value> scan_conditions(const std::vector<Condition>& conds, std::size_t n, OnMatch on_match) {
    for (std::size_t i = 0; i < n; ++i) {
        bool all = true;
        for (const auto& c : conds) {
            Value m = criteria_match(c.range.cells[i], c.criteria);
            if (m.is_error()) return m;
            if (!m.logical()) {
                all = false;
                break;
            }
        }
        if (all) {
            if (auto err = on_match(i)) return err;
        }
    }
    return std::nullopt;
}

/// Builds conditions from alternating (range, criteria) arguments starting at
/// `first`; all ranges (and `sum`, if given) must hold the same number of cells.
std::optional<Value> build_conditions(const Args& args, std::size_t first, const RangeView* sum,
                                      std::vector<Condition>& out) {
    if ((args.size() - first) % 2 != 0) return Value(ErrorKind::Value);
    for (std::size_t i = first; i + 1 < args.size(); i += 2) {
        const auto& crit = std::get<Value>(args[i + 1]);
        if (crit.is_error()) return crit;
        out.push_back(Condition{block_of(args[i]), parse_criteria(crit)});
    }
    const std::size_t n = sum != nullptr ? sum->size() : out.front().range.size();
    for (const auto& c : out) {
        if (c.range.size() != n) return Value(ErrorKind::Value);
    }
    return std::nullopt;
}

Operand conditional_sum(const std::vector<Condition>& conds, const RangeView& sum, bool average) {
    double total = 0.0;
    double matches = 0.0;
    auto err = scan_conditions(conds, sum.size(), [&](std::size_t i) -> std::optional<Value> {
        const Value& v = sum.cells[i];
        if (v.is_error()) return v;
        if (v.is_number()) total += v.number();
        matches += 1;
        return std::nullopt;
    });
    if (err) return *err;
    if (!average) return Value(total);
    if (matches == 0) return Value(ErrorKind::Div0);
    return Value(total / matches);
}

Operand fn_countifs(const Args& args, Evaluator&) {
    std::vector<Condition> conds;
    if (auto err = build_conditions(args, 0, nullptr, conds)) return *err;
    double count = 0;
    auto err = scan_conditions(conds, conds.front().range.size(), [&](std::size_t) -> std::optional<Value> {
        count += 1;
        return std::nullopt;
    });
    if (err) return *err;
    return Value(count);
}

Operand fn_sumifs(const Args& args, Evaluator&) {
    const RangeView sum = block_of(args[0]);
    std::vector<Condition> conds;
    if (auto err = build_conditions(args, 1, &sum, conds)) return *err;
    return conditional_sum(conds, sum, false);
}

Operand single_condition_sum(const Args& args, bool average) {
    const RangeView sum = block_of(args.size() > 2 ? args[2] : args[0]);
    std::vector<Condition> conds;
    if (auto err = build_conditions(Args{args[0], args[1]}, 0, &sum, conds)) return *err;
    return conditional_sum(conds, sum, average);
}

Operand fn_sumif(const Args& args, Evaluator&) { return single_condition_sum(args, false); }
Operand fn_averageif(const Args& args, Evaluator&) { return single_condition_sum(args, true); }

const std::unordered_map<std::string_view, Impl>& implementations() {
    static const std::unordered_map<std::string_view, Impl> impls = {
        {"LEN", fn_len},         {"LEFT", fn_left},         {"RIGHT", fn_right},
        {"SEARCH", fn_search},   {"SUM", fn_sum},           {"AVERAGE", fn_average},
        {"MIN", fn_min},         {"MAX", fn_max},           {"MATCH", fn_match},
        {"INDEX", fn_index},     {"ISERROR", fn_iserror},   {"SUBSTITUTE", fn_substitute},
        {"SMALL", fn_small},     {"LARGE", fn_large},       {"AND", fn_and},
        {"OR", fn_or},           {"NOT", fn_not},           {"INT", fn_int},
        {"ROUND", fn_round},     {"RAND", fn_rand},         {"OFFSET", fn_offset},
        {"ROW", fn_row},         {"COLUMN", fn_column},     {"COUNT", fn_count},
        {"COUNTA", fn_counta},   {"COUNTIF", fn_countifs},  {"COUNTIFS", fn_countifs},
        {"SUMIF", fn_sumif},     {"SUMIFS", fn_sumifs},     {"AVERAGEIF", fn_averageif},
        {"VLOOKUP", fn_vlookup}, {"HLOOKUP", fn_hlookup},   {"IFERROR", fn_iferror},
    };
    return impls;
}

// ---------------------------------------------------------------------------

Operand Evaluator::eval(const Expr& e) {
    return std::visit(
        lang::Overloaded{
            [](const lang::NumberLit& n) -> Operand { return Value(n.value); },
            [](const lang::TextLit& t) -> Operand { return Value(t.value); },
            [](const lang::BoolLit& b) -> Operand { return Value(b.value); },
            [&](const lang::CellRef& c) -> Operand { return from_resolved(data::resolve(table(), c)); },
            [&](const lang::RangeRef& r) -> Operand { return from_resolved(data::resolve(table(), r)); },
            [&](const lang::NameRef& n) -> Operand { return from_resolved(data::resolve(table(), n)); },
            [&](const lang::Unary& u) -> Operand {
                Args args{eval(*u.operand)};
                if (u.op == UnaryOp::Plus) return args[0];
                return lift(args, {true}, [op = u.op](const Args& a) -> Operand {
                    return unary_value(op, std::get<Value>(a[0]));
                });
            },
            [&](const lang::Binary& b) -> Operand {
                Args args{eval(*b.lhs), eval(*b.rhs)};
                return lift(args, {true, true}, [op = b.op](const Args& a) -> Operand {
                    return binary_value(op, std::get<Value>(a[0]), std::get<Value>(a[1]));
                });
            },
            [&](const lang::Call& c) -> Operand { return eval_call(c); },
        },
        e.node());
}

Operand Evaluator::eval_if(const lang::Call& c) {
    Operand cond = eval(c.args[0]);
    if (ctx_.mode == Mode::Scalar || !is_array(cond)) {
        const Value cv = ctx_.mode == Mode::Scalar ? intersect(cond, ctx_.current_row) : scalar_of(cond);
        const Value b = to_logical(cv);
        if (b.is_error()) return b;
        // Only the taken branch is evaluated.
        if (!b.logical() && c.args.size() < 3) return Value(false);
        Operand branch = eval(c.args[b.logical() ? 1 : 2]);
        if (ctx_.mode == Mode::Scalar) return intersect(branch, ctx_.current_row);
        return branch;
    }
    Args args{std::move(cond), eval(c.args[1]), c.args.size() > 2 ? eval(c.args[2]) : Operand(Value(false))};
    return lift(args, {true, true, true}, [](const Args& a) -> Operand {
        const Value b = to_logical(std::get<Value>(a[0]));
        if (b.is_error()) return b;
        return b.logical() ? a[1] : a[2];
    });
}

Operand Evaluator::eval_call(const lang::Call& c) {
    const FunctionSpec* spec = find_function(c.name);
    if (spec == nullptr) return Value(ErrorKind::Name);
    if (!spec->accepts(c.args.size())) return Value(ErrorKind::Value);
    if (c.name == "IF") return eval_if(c);

    Args args;
    args.reserve(c.args.size());
    for (const auto& a : c.args) args.push_back(eval(a));

    std::vector<bool> lifted(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) lifted[i] = spec->param(i) == Param::Scalar;

    const Impl impl = implementations().at(spec->name);
    const bool propagate = spec->propagates_errors;
    return lift(args, lifted, [&](const Args& a) -> Operand {
        if (propagate) {
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (!lifted[i]) continue;
                if (const auto& v = std::get<Value>(a[i]); v.is_error()) return v;
            }
        }
        return impl(a, *this);
    });
}

void collect_precedents(const Expr& expr, std::vector<Reference>& out) {
    lang::walk(expr, [&](const Expr& e) {
        std::optional<Reference> ref;
        if (const auto* c = e.as<lang::CellRef>()) ref = *c;
        if (const auto* r = e.as<lang::RangeRef>()) ref = *r;
        if (const auto* n = e.as<lang::NameRef>()) ref = *n;
        if (ref && std::find(out.begin(), out.end(), *ref) == out.end()) out.push_back(*ref);
    });
}

bool is_literal_one(const Expr& e) {
    const auto* n = e.as<lang::NumberLit>();
    return n != nullptr && n->value == 1.0;
}

}  // namespace

Value intersect(const Operand& operand, std::optional<std::size_t> current_row) {
    if (const auto* v = std::get_if<Value>(&operand)) return *v;
    const auto& r = std::get<RangeView>(operand);
    if (r.is_single()) return r.cells.front();
    if (r.cols != 1 || !current_row) return ErrorKind::Value;
    const std::size_t first = r.origin ? r.origin->row : 1;
    if (*current_row < first || *current_row - first >= r.rows) return ErrorKind::Value;
    return r.cells[*current_row - first];
}

Operand evaluate(const lang::Expr& expr, const EvalContext& ctx) { return Evaluator(ctx).run(expr); }

Operand evaluate(const lang::Formula& formula, const data::Table& table, std::optional<std::size_t> current_row,
                 std::uint64_t seed) {
    EvalContext ctx(table, formula.array_entered ? Mode::Array : Mode::Scalar, current_row, seed);
    return evaluate(formula.body, ctx);
}

std::vector<Reference> precedents(const lang::Expr& expr) {
    std::vector<Reference> out;
    collect_precedents(expr, out);
    return out;
}

std::string to_string(const Reference& ref) {
    return std::visit(lang::Overloaded{
                          [](const lang::CellRef& c) { return lang::format(lang::cell(c)); },
                          [](const lang::RangeRef& r) { return lang::format(lang::range(r)); },
                          [](const lang::NameRef& n) { return n.name; },
                      },
                      ref);
}

bool yields_vector(const lang::Expr& expr) {
    return std::visit(
        lang::Overloaded{
            [](const lang::RangeRef& r) { return r.rows() * r.cols() > 1; },
            [](const lang::NameRef&) { return true; },
            [](const lang::Unary& u) { return yields_vector(*u.operand); },
            [](const lang::Binary& b) { return yields_vector(*b.lhs) || yields_vector(*b.rhs); },
            [](const lang::Call& c) {
                const FunctionSpec* spec = find_function(c.name);
                if (spec == nullptr) return false;
                if (c.name == "OFFSET") {
                    if (c.args.size() >= 4) {
                        return !is_literal_one(c.args[3]) || (c.args.size() >= 5 && !is_literal_one(c.args[4]));
                    }
                    return !c.args.empty() && yields_vector(c.args[0]);
                }
                if (c.name == "ROW" || c.name == "COLUMN") {
                    if (c.args.empty()) return false;
                    const auto* r = c.args[0].as<lang::RangeRef>();
                    if (r != nullptr) return (c.name == "ROW" ? r->rows() : r->cols()) > 1;
                    return c.name == "ROW" && c.args[0].is<lang::NameRef>();
                }
                for (std::size_t i = 0; i < c.args.size(); ++i) {
                    if (spec->param(i) == Param::Scalar && yields_vector(c.args[i])) return true;
                }
                return false;
            },
            [](const auto&) { return false; },
        },
        expr.node());
}

bool is_volatile(const lang::Expr& expr) {
    bool found = false;
    lang::walk(expr, [&](const Expr& e) {
        if (const auto* c = e.as<lang::Call>(); c != nullptr && c->name == "RAND") found = true;
    });
    return found;
}

}  // namespace sprego::eval
