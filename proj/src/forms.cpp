#include "mm3/forms.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace mm3 {

const char* group_name(Group g) {
    switch (g) {
    case Group::U: return "U";
    case Group::V: return "V";
    case Group::W: return "W";
    }
    return "?";
}

namespace {

char kind_letter(RefKind k) {
    switch (k) {
    case RefKind::A: return 'a';
    case RefKind::B: return 'b';
    case RefKind::M: return 'm';
    case RefKind::U: return 'u';
    case RefKind::V: return 'v';
    case RefKind::W: return 'w';
    case RefKind::T: return 't';
    case RefKind::C: return 'c';
    case RefKind::Zero: break;
    }
    return '0';
}

bool is_entry_kind(RefKind k) { return k == RefKind::A || k == RefKind::B || k == RefKind::C; }

} // namespace

std::string to_string(Ref r) {
    if (r.kind == RefKind::Zero) return "0";
    std::string out(1, kind_letter(r.kind));
    if (is_entry_kind(r.kind)) {
        out += static_cast<char>('1' + r.index / kDim);
        out += static_cast<char>('1' + r.index % kDim);
    } else {
        out += std::to_string(r.index + 1);
    }
    return out;
}

std::optional<Ref> parse_ref(std::string_view text) {
    if (text == "0") return Ref{};
    if (text.size() < 2) return std::nullopt;
    RefKind kind;
    switch (text[0]) {
    case 'a': kind = RefKind::A; break;
    case 'b': kind = RefKind::B; break;
    case 'm': kind = RefKind::M; break;
    case 'u': kind = RefKind::U; break;
    case 'v': kind = RefKind::V; break;
    case 'w': kind = RefKind::W; break;
    case 't': kind = RefKind::T; break;
    case 'c': kind = RefKind::C; break;
    default: return std::nullopt;
    }
    std::string_view rest = text.substr(1);
    if (is_entry_kind(kind)) {
        if (rest.size() != 2 || rest[0] < '1' || rest[0] > '3' || rest[1] < '1' || rest[1] > '3')
            return std::nullopt;
        return Ref{kind, static_cast<std::uint16_t>((rest[0] - '1') * kDim + (rest[1] - '1'))};
    }
    if (rest.empty() || rest[0] == '0') return std::nullopt;
    int value = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
    if (ec != std::errc{} || ptr != rest.data() + rest.size() || value < 1 || value > 65535)
        return std::nullopt;
    return Ref{kind, static_cast<std::uint16_t>(value - 1)};
}

std::optional<Group> group_of(RefKind k) {
    switch (k) {
    case RefKind::A:
    case RefKind::U: return Group::U;
    case RefKind::B:
    case RefKind::V: return Group::V;
    case RefKind::M:
    case RefKind::W:
    case RefKind::C: return Group::W;
    default: return std::nullopt;
    }
}

int lowering_cost(const TermList& terms) {
    if (terms.empty()) return 0;
    bool any_positive = std::any_of(terms.begin(), terms.end(), [](const Term& t) { return t.sign > 0; });
    return static_cast<int>(terms.size()) - 1 + (any_positive ? 0 : 1);
}

FormSet forms_of(const Scheme& s) {
    FormSet fs;
    fs.rank = s.rank();
    fs.forms.resize(2 * fs.rank + kEntries);
    for (int r = 0; r < fs.rank; ++r) {
        Form& uf = fs.u_form(r);
        Form& vf = fs.v_form(r);
        uf.group = Group::U;
        vf.group = Group::V;
        for (int e = 0; e < kEntries; ++e) {
            if (int c = s[r].u().coeff(e)) uf.terms.push_back({a_entry(e), c});
            if (int c = s[r].v().coeff(e)) vf.terms.push_back({b_entry(e), c});
        }
    }
    for (int e = 0; e < kEntries; ++e) {
        Form& wf = fs.w_form(e);
        wf.group = Group::W;
        for (int r = 0; r < fs.rank; ++r)
            if (int c = s[r].w().coeff(e)) wf.terms.push_back({product_ref(r), c});
    }
    return fs;
}

Scheme scheme_from_forms(const FormSet& fs) {
    if (fs.rank < 0 || fs.forms.size() != static_cast<std::size_t>(2 * fs.rank + kEntries))
        throw std::invalid_argument("form set has wrong shape");
    std::vector<std::array<int, kEntries>> u(fs.rank), v(fs.rank), w(fs.rank);
    auto fill = [](const Form& f, RefKind kind, std::array<int, kEntries>& out) {
        for (const Term& t : f.terms) {
            if (t.var.kind != kind || t.var.index >= kEntries)
                throw std::invalid_argument("unexpected variable " + to_string(t.var) + " in form");
            out[t.var.index] = t.sign;
        }
    };
    for (int r = 0; r < fs.rank; ++r) {
        fill(fs.u_form(r), RefKind::A, u[r]);
        fill(fs.v_form(r), RefKind::B, v[r]);
    }
    for (int e = 0; e < kEntries; ++e) {
        for (const Term& t : fs.w_form(e).terms) {
            if (t.var.kind != RefKind::M || t.var.index >= fs.rank)
                throw std::invalid_argument("unexpected variable " + to_string(t.var) + " in output form");
            w[t.var.index][e] = t.sign;
        }
    }
    std::vector<Component> comps;
    comps.reserve(fs.rank);
    for (int r = 0; r < fs.rank; ++r)
        comps.emplace_back(LinVec::from_coeffs(u[r]), LinVec::from_coeffs(v[r]), LinVec::from_coeffs(w[r]));
    return Scheme(std::move(comps));
}

int naive_cost(const FormSet& fs) {
    int total = 0;
    for (const Form& f : fs.forms) total += lowering_cost(f.terms);
    return total;
}

} // namespace mm3
