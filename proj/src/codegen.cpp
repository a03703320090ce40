#include "mm3/codegen.hpp"

#include <sstream>
#include <stdexcept>

namespace mm3 {

Dialect parse_dialect(std::string_view name) {
    if (name == "pseudo") return Dialect::Pseudo;
    if (name == "c-like") return Dialect::CLike;
    throw std::invalid_argument("unknown dialect \"" + std::string(name) + "\"");
}

namespace {

std::string c_operand(Ref r) { return r.kind == RefKind::Zero ? "T(0)" : to_string(r); }

std::string sum_text(const TermList& terms) {
    if (terms.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i == 0)
            out += terms[i].sign > 0 ? "" : "-";
        else
            out += terms[i].sign > 0 ? " + " : " - ";
        out += to_string(terms[i].var);
    }
    return out;
}

std::string factor_text(const TermList& terms) {
    if (terms.size() == 1 && terms[0].sign > 0) return to_string(terms[0].var);
    return "(" + sum_text(terms) + ")";
}

} // namespace

std::string emit_code(const Program& p, Dialect dialect, std::string_view function_name) {
    const std::vector<Group> groups = check_program(p);
    const OpCount count = count_operations(p);
    std::ostringstream out;
    const bool c_like = dialect == Dialect::CLike;
    auto operand = [&](Ref r) { return c_like ? c_operand(r) : to_string(r); };

    if (c_like) {
        out << "// Straight-line 3x3 matrix multiplication: " << count.muls << " multiplications, "
            << count.adds_total << " additions/subtractions.\n"
            << "// a, b and c point to row-major 3x3 arrays.\n"
            << "template <typename T>\n"
            << "inline void " << function_name << "(const T* a, const T* b, T* c) {\n";
        for (int e = 0; e < kEntries; ++e)
            out << "    [[maybe_unused]] const T " << to_string(a_entry(e)) << " = a[" << e << "];\n";
        for (int e = 0; e < kEntries; ++e)
            out << "    [[maybe_unused]] const T " << to_string(b_entry(e)) << " = b[" << e << "];\n";
    }
    const char* indent = c_like ? "    const T " : "";
    const char* end = c_like ? ";\n" : "\n";

    auto emit_phase = [&](bool input_side) {
        for (std::size_t i = 0; i < p.assignments.size(); ++i) {
            if ((groups[i] != Group::W) != input_side) continue;
            const Assignment& a = p.assignments[i];
            out << indent << to_string(a.name) << " = " << operand(a.lhs) << (a.op == Op::Add ? " + " : " - ")
                << operand(a.rhs) << end;
        }
    };
    emit_phase(true);
    for (const Product& m : p.products)
        out << indent << to_string(m.name) << " = " << operand(m.left) << " * " << operand(m.right) << end;
    emit_phase(false);

    for (int e = 0; e < kEntries; ++e) {
        const Ref r = p.outputs[e];
        if (c_like) {
            out << "    c[" << e << "] = " << operand(r) << ";\n";
        } else if (r.kind != RefKind::C) {
            out << to_string(output_ref(e)) << " = " << operand(r) << "\n";
        }
    }
    if (c_like) out << "}\n";
    return out.str();
}

std::string render_algebraic(const Program& p) {
    const ProgramSketch s = raise(p);
    std::ostringstream out;
    bool any = false;
    for (RefKind kind : {RefKind::U, RefKind::V}) {
        bool section = false;
        for (const Assignment& a : s.named) {
            if (a.name.kind != kind) continue;
            if (!section && any) out << "\n";
            section = any = true;
            out << to_string(a.name) << " = " << to_string(a.lhs) << (a.op == Op::Add ? " + " : " - ")
                << to_string(a.rhs) << "\n";
        }
    }
    if (any) out << "\n";
    for (std::size_t k = 0; k < s.operands.size(); ++k)
        out << to_string(p.products[k].name) << " = " << factor_text(s.operands[k][0]) << " * "
            << factor_text(s.operands[k][1]) << "\n";
    bool w_section = false;
    for (const Assignment& a : s.named) {
        if (a.name.kind != RefKind::W) continue;
        if (!w_section) out << "\n";
        w_section = true;
        out << to_string(a.name) << " = " << to_string(a.lhs) << (a.op == Op::Add ? " + " : " - ")
            << to_string(a.rhs) << "\n";
    }
    out << "\n";
    for (int e = 0; e < kEntries; ++e) out << to_string(output_ref(e)) << " = " << sum_text(s.outputs[e]) << "\n";
    return out.str();
}

} // namespace mm3
