#include "mm3/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mm3 {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw FormatError(msg); }

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
}

const json& field(const json& obj, const char* name, const std::string& where) {
    if (!obj.is_object()) fail(where + ": expected an object");
    auto it = obj.find(name);
    if (it == obj.end()) fail(where + ": missing field \"" + name + "\"");
    return *it;
}

void check_format(const json& doc, std::string_view expected) {
    const json& f = field(doc, "format", "document");
    if (!f.is_string() || f.get<std::string>() != expected)
        fail("document: format must be \"" + std::string(expected) + "\"");
}

Metadata parse_metadata(const json& doc) {
    Metadata md;
    auto it = doc.find("metadata");
    if (it == doc.end()) return md;
    if (!it->is_object()) fail("metadata: expected an object");
    for (auto& [key, value] : it->items()) {
        if (!value.is_string()) fail("metadata." + key + ": values must be strings");
        md[key] = value.get<std::string>();
    }
    return md;
}

std::string quote(std::string_view s) { return json(std::string(s)).dump(); }

void emit_metadata(std::ostringstream& out, const Metadata& md) {
    out << "  \"metadata\": {";
    bool first = true;
    for (const auto& [k, v] : md) {
        out << (first ? "\n" : ",\n") << "    " << quote(k) << ": " << quote(v);
        first = false;
    }
    out << (md.empty() ? "}" : "\n  }") << "\n";
}

LinVec parse_linvec(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != kEntries) fail(where + ": expected an array of 9 integers");
    std::array<int, kEntries> c{};
    for (int i = 0; i < kEntries; ++i) {
        if (!j[i].is_number_integer()) fail(where + "[" + std::to_string(i) + "]: expected an integer");
        auto value = j[i].get<long long>();
        if (value < -1 || value > 1)
            fail(where + "[" + std::to_string(i) + "]: coefficient " + std::to_string(value) +
                 " out of range {-1,0,1}");
        c[i] = static_cast<int>(value);
    }
    return LinVec::from_coeffs(c);
}

Ref parse_var(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where + ": expected a variable name");
    auto r = parse_ref(j.get<std::string>());
    if (!r) fail(where + ": invalid variable name " + j.dump());
    return *r;
}

TermList parse_terms(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where + ": expected a list of [sign, variable] pairs");
    TermList out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string at = where + "[" + std::to_string(i) + "]";
        const json& t = j[i];
        if (!t.is_array() || t.size() != 2 || !t[0].is_string())
            fail(at + ": expected [\"+\" or \"-\", variable]");
        const std::string sign = t[0].get<std::string>();
        if (sign != "+" && sign != "-") fail(at + ": sign must be \"+\" or \"-\"");
        out.push_back({parse_var(t[1], at), sign == "+" ? 1 : -1});
    }
    return out;
}

std::string terms_json(const TermList& terms) {
    std::string out = "[";
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) out += ", ";
        out += terms[i].sign > 0 ? "[\"+\", " : "[\"-\", ";
        out += quote(to_string(terms[i].var)) + "]";
    }
    return out + "]";
}

std::string operand_json(const TermList& terms) {
    if (terms.size() == 1 && terms[0].sign > 0) return quote(to_string(terms[0].var));
    return terms_json(terms);
}

std::string coeffs_json(const LinVec& v) {
    std::string out = "[";
    for (int i = 0; i < kEntries; ++i) {
        if (i) out += ", ";
        out += std::to_string(v.coeff(i));
    }
    return out + "]";
}

} // namespace

SchemeFile parse_scheme(std::string_view text) {
    json doc = parse_json(text);
    check_format(doc, kSchemeFormat);
    const json& n = field(doc, "n", "document");
    if (!n.is_number_integer() || n.get<long long>() != kDim) fail("n: only n = 3 is supported");
    const json& comps = field(doc, "components", "document");
    if (!comps.is_array()) fail("components: expected an array");
    const json& rank = field(doc, "rank", "document");
    if (!rank.is_number_integer() || rank.get<long long>() != static_cast<long long>(comps.size()))
        fail("rank: must equal the number of components (" + std::to_string(comps.size()) + ")");
    if (comps.empty() || comps.size() > static_cast<std::size_t>(kMaxRank))
        fail("components: rank must be between 1 and " + std::to_string(kMaxRank));

    std::vector<Component> out;
    for (std::size_t r = 0; r < comps.size(); ++r) {
        const std::string where = "components[" + std::to_string(r) + "]";
        Component c;
        for (Slot s : {Slot::U, Slot::V, Slot::W}) {
            const std::string at = where + "." + slot_name(s);
            c[s] = parse_linvec(field(comps[r], slot_name(s), where), at);
            if (c[s].is_zero()) fail(at + ": factor is all zero");
        }
        out.push_back(c);
    }
    return {Scheme(std::move(out)), parse_metadata(doc)};
}

ProgramFile parse_program(std::string_view text) {
    json doc = parse_json(text);
    check_format(doc, kProgramFormat);

    if (auto it = doc.find("inputs"); it != doc.end()) {
        json expected = json::array();
        for (int e = 0; e < kEntries; ++e) expected.push_back(to_string(a_entry(e)));
        for (int e = 0; e < kEntries; ++e) expected.push_back(to_string(b_entry(e)));
        if (*it != expected) fail("inputs: must list a11..a33, b11..b33 in row-major order");
    }

    ProgramSketch sketch;
    const json& assigns = field(doc, "assignments", "document");
    if (!assigns.is_array()) fail("assignments: expected an array");
    for (std::size_t i = 0; i < assigns.size(); ++i) {
        const std::string where = "assignments[" + std::to_string(i) + "]";
        const json& a = assigns[i];
        Assignment out;
        out.name = parse_var(field(a, "name", where), where + ".name");
        const json& op = field(a, "op", where);
        if (!op.is_string() || (op != "add" && op != "sub")) fail(where + ".op: must be \"add\" or \"sub\"");
        out.op = op == "add" ? Op::Add : Op::Sub;
        out.lhs = parse_var(field(a, "lhs", where), where + ".lhs");
        out.rhs = parse_var(field(a, "rhs", where), where + ".rhs");
        sketch.named.push_back(out);
    }

    const json& prods = field(doc, "products", "document");
    if (!prods.is_array()) fail("products: expected an array");
    if (prods.size() > static_cast<std::size_t>(kMaxRank)) fail("products: more than 64 products");
    for (std::size_t k = 0; k < prods.size(); ++k) {
        const std::string where = "products[" + std::to_string(k) + "]";
        Ref name = parse_var(field(prods[k], "name", where), where + ".name");
        if (name != product_ref(static_cast<int>(k)))
            fail(where + ".name: expected " + to_string(product_ref(static_cast<int>(k))));
        std::array<TermList, 2> ops;
        const char* sides[2] = {"left", "right"};
        for (int s = 0; s < 2; ++s) {
            const json& operand = field(prods[k], sides[s], where);
            const std::string at = where + "." + sides[s];
            ops[s] = operand.is_string() ? TermList{{parse_var(operand, at), 1}} : parse_terms(operand, at);
        }
        sketch.operands.push_back(std::move(ops));
    }

    const json& outs = field(doc, "outputs", "document");
    if (!outs.is_object()) fail("outputs: expected an object keyed c11..c33");
    for (auto& [key, value] : outs.items()) {
        auto r = parse_ref(key);
        if (!r || r->kind != RefKind::C) fail("outputs: unknown output " + quote(key));
    }
    for (int e = 0; e < kEntries; ++e) {
        const std::string name = to_string(output_ref(e));
        auto it = outs.find(name);
        if (it == outs.end()) fail("outputs: missing " + name);
        sketch.outputs[e] = parse_terms(*it, "outputs." + name);
    }

    try {
        return {lower(sketch), parse_metadata(doc)};
    } catch (const ProgramError& e) {
        fail(e.what());
    }
}

std::string serialize_scheme(const Scheme& s, const Metadata& metadata) {
    std::ostringstream out;
    out << "{\n  \"format\": " << quote(kSchemeFormat) << ",\n  \"n\": " << kDim << ",\n  \"rank\": " << s.rank()
        << ",\n  \"components\": [";
    for (int r = 0; r < s.rank(); ++r) {
        out << (r ? ",\n" : "\n") << "    {\"u\": " << coeffs_json(s[r].u()) << ", \"v\": " << coeffs_json(s[r].v())
            << ", \"w\": " << coeffs_json(s[r].w()) << "}";
    }
    out << (s.rank() ? "\n  ],\n" : "],\n");
    emit_metadata(out, metadata);
    out << "}\n";
    return out.str();
}

std::string serialize_program(const Program& p, const Metadata& metadata) {
    ProgramSketch s = raise(p);
    std::ostringstream out;
    out << "{\n  \"format\": " << quote(kProgramFormat) << ",\n  \"inputs\": [";
    for (int e = 0; e < 2 * kEntries; ++e)
        out << (e ? ", " : "") << quote(to_string(e < kEntries ? a_entry(e) : b_entry(e - kEntries)));
    out << "],\n  \"assignments\": [";
    for (std::size_t i = 0; i < s.named.size(); ++i) {
        const Assignment& a = s.named[i];
        out << (i ? ",\n" : "\n") << "    {\"name\": " << quote(to_string(a.name))
            << ", \"op\": " << (a.op == Op::Add ? "\"add\"" : "\"sub\"") << ", \"lhs\": " << quote(to_string(a.lhs))
            << ", \"rhs\": " << quote(to_string(a.rhs)) << "}";
    }
    out << (s.named.empty() ? "],\n" : "\n  ],\n") << "  \"products\": [";
    for (std::size_t k = 0; k < s.operands.size(); ++k) {
        out << (k ? ",\n" : "\n") << "    {\"name\": " << quote(to_string(p.products[k].name))
            << ", \"left\": " << operand_json(s.operands[k][0]) << ", \"right\": " << operand_json(s.operands[k][1])
            << "}";
    }
    out << (s.operands.empty() ? "],\n" : "\n  ],\n") << "  \"outputs\": {";
    for (int e = 0; e < kEntries; ++e)
        out << (e ? ",\n" : "\n") << "    " << quote(to_string(output_ref(e))) << ": " << terms_json(s.outputs[e]);
    out << "\n  },\n";
    emit_metadata(out, metadata);
    out << "}\n";
    return out.str();
}

FileKind detect_kind(std::string_view text) {
    json doc = parse_json(text);
    if (!doc.is_object() || !doc.contains("format") || !doc["format"].is_string())
        fail("document: missing \"format\" field");
    const std::string f = doc["format"].get<std::string>();
    if (f == kSchemeFormat) return FileKind::Scheme;
    if (f == kProgramFormat) return FileKind::Program;
    fail("document: unknown format " + quote(f));
}

AnyFile parse_any(std::string_view text) {
    if (detect_kind(text) == FileKind::Scheme) return parse_scheme(text);
    return parse_program(text);
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace mm3
