#include "sprego/eval/criteria.hpp"

namespace sprego::eval {

std::string_view split_criteria_operator(std::string_view text, lang::BinaryOp& op) {
    using lang::BinaryOp;
    static constexpr std::pair<std::string_view, BinaryOp> kOps[] = {
        {">=", BinaryOp::Ge}, {"<=", BinaryOp::Le}, {"<>", BinaryOp::Ne},
        {">", BinaryOp::Gt},  {"<", BinaryOp::Lt},  {"=", BinaryOp::Eq},
    };
    for (const auto& [prefix, o] : kOps) {
        if (text.substr(0, prefix.size()) == prefix) {
            op = o;
            return text.substr(prefix.size());
        }
    }
    op = BinaryOp::Eq;
    return text;
}

Criteria parse_criteria(const Value& v) {
    if (!v.is_text()) return Criteria{lang::BinaryOp::Eq, v};
    Criteria c;
    const std::string_view rest = split_criteria_operator(v.text(), c.op);
    if (auto n = data::parse_numeral(rest)) {
        c.operand = *n;
    } else {
        c.operand = std::string(rest);
    }
    return c;
}

bool has_wildcard(const Criteria& c) {
    return c.operand.is_text() && c.operand.text().find_first_of("*?") != std::string::npos;
}

Value criteria_match(const Value& cell, const Criteria& c) { return compare_op(c.op, cell, c.operand); }

}  // namespace sprego::eval
