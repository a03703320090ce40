#include "mm3/program.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace mm3 {

namespace {

bool is_named_kind(RefKind k) { return k == RefKind::U || k == RefKind::V || k == RefKind::W; }

bool is_input_side(Group g) { return g != Group::W; }

[[noreturn]] void fail(const std::string& msg) { throw ProgramError(msg); }

void check_term_list(const TermList& terms, Group group, const std::string& where) {
    std::unordered_set<std::uint32_t> seen;
    for (const Term& t : terms) {
        if (t.sign != 1 && t.sign != -1) fail(where + ": term sign must be +1 or -1");
        auto g = group_of(t.var.kind);
        if (!g || t.var.kind == RefKind::C)
            fail(where + ": " + to_string(t.var) + " cannot appear in a sum");
        if (*g != group)
            fail(where + ": " + to_string(t.var) + " belongs to the " + group_name(*g) + " side, expected " +
                 group_name(group));
        if (!seen.insert(t.var.id()).second) fail(where + ": " + to_string(t.var) + " appears twice");
    }
}

// Named definitions in dependency order, stable for already ordered input.
std::vector<Assignment> order_named(const std::vector<Assignment>& named) {
    std::unordered_map<std::uint32_t, std::size_t> index;
    for (std::size_t i = 0; i < named.size(); ++i) {
        const Assignment& a = named[i];
        if (!is_named_kind(a.name.kind))
            fail("assignment " + to_string(a.name) + ": named intermediates must be u-, v- or w-variables");
        if (!index.emplace(a.name.id(), i).second) fail("assignment " + to_string(a.name) + " defined twice");
    }
    std::vector<int> state(named.size(), 0);
    std::vector<Assignment> out;
    out.reserve(named.size());
    std::function<void(std::size_t)> visit = [&](std::size_t i) {
        if (state[i] == 2) return;
        if (state[i] == 1) fail("cyclic definition through " + to_string(named[i].name));
        state[i] = 1;
        for (Ref dep : {named[i].lhs, named[i].rhs}) {
            if (!is_named_kind(dep.kind)) continue;
            auto it = index.find(dep.id());
            if (it == index.end())
                fail("assignment " + to_string(named[i].name) + " references undefined " + to_string(dep));
            visit(it->second);
        }
        state[i] = 2;
        out.push_back(named[i]);
    };
    for (std::size_t i = 0; i < named.size(); ++i) visit(i);
    return out;
}

class Lowerer {
public:
    explicit Lowerer(Program& p) : p_(p) {}

    Ref lower_sum(const TermList& terms, std::optional<Ref> final_name) {
        if (terms.empty()) return Ref{};
        auto head = std::find_if(terms.begin(), terms.end(), [](const Term& t) { return t.sign > 0; });
        if (terms.size() == 1 && head != terms.end()) return head->var;
        Ref acc = head == terms.end() ? Ref{} : head->var;
        std::size_t remaining = terms.size() - (head == terms.end() ? 0 : 1);
        for (auto it = terms.begin(); it != terms.end(); ++it) {
            if (it == head) continue;
            --remaining;
            Ref name = (remaining == 0 && final_name) ? *final_name
                                                      : Ref{RefKind::T, static_cast<std::uint16_t>(next_temp_++)};
            p_.assignments.push_back({name, it->sign > 0 ? Op::Add : Op::Sub, acc, it->var});
            acc = name;
        }
        return acc;
    }

    int temps() const { return next_temp_; }

private:
    Program& p_;
    int next_temp_ = 0;
};

} // namespace

Program lower(const ProgramSketch& sketch) {
    std::vector<Assignment> named = order_named(sketch.named);
    for (std::size_t r = 0; r < sketch.operands.size(); ++r) {
        check_term_list(sketch.operands[r][0], Group::U, "product m" + std::to_string(r + 1) + " left");
        check_term_list(sketch.operands[r][1], Group::V, "product m" + std::to_string(r + 1) + " right");
    }
    for (int e = 0; e < kEntries; ++e) check_term_list(sketch.outputs[e], Group::W, to_string(output_ref(e)));
    if (sketch.operands.size() > 65535) fail("too many products");

    Program p;
    for (const Assignment& a : named)
        if (is_input_side(*group_of(a.name.kind))) p.assignments.push_back(a);
    Lowerer lowerer(p);
    for (std::size_t r = 0; r < sketch.operands.size(); ++r) {
        Ref left = lowerer.lower_sum(sketch.operands[r][0], std::nullopt);
        Ref right = lowerer.lower_sum(sketch.operands[r][1], std::nullopt);
        p.products.push_back({product_ref(static_cast<int>(r)), left, right});
    }
    for (const Assignment& a : named)
        if (!is_input_side(*group_of(a.name.kind))) p.assignments.push_back(a);
    for (int e = 0; e < kEntries; ++e) p.outputs[e] = lowerer.lower_sum(sketch.outputs[e], output_ref(e));
    if (lowerer.temps() > 65535) fail("too many temporaries");
    check_program(p);
    return p;
}

ProgramSketch raise(const Program& p) {
    std::unordered_map<std::uint32_t, const Assignment*> defs;
    for (const Assignment& a : p.assignments) defs[a.name.id()] = &a;
    std::function<void(Ref, TermList&)> flatten = [&](Ref r, TermList& out) {
        if (r.kind == RefKind::Zero) return;
        if (r.kind == RefKind::T || r.kind == RefKind::C) {
            auto it = defs.find(r.id());
            if (it == defs.end()) fail("undefined " + to_string(r));
            flatten(it->second->lhs, out);
            out.push_back({it->second->rhs, it->second->op == Op::Add ? 1 : -1});
            return;
        }
        out.push_back({r, 1});
    };
    ProgramSketch s;
    for (const Assignment& a : p.assignments)
        if (is_named_kind(a.name.kind)) s.named.push_back(a);
    for (const Product& m : p.products) {
        std::array<TermList, 2> ops;
        flatten(m.left, ops[0]);
        flatten(m.right, ops[1]);
        s.operands.push_back(std::move(ops));
    }
    for (int e = 0; e < kEntries; ++e) flatten(p.outputs[e], s.outputs[e]);
    return s;
}

std::vector<Group> check_program(const Program& p) {
    const std::size_t n = p.assignments.size();
    std::vector<Group> groups(n);
    std::unordered_map<std::uint32_t, Group> temp_group;
    std::unordered_set<std::uint32_t> names;

    auto operand_group = [&](Ref r, const std::string& where) -> std::optional<Group> {
        if (r.kind == RefKind::Zero) return std::nullopt;
        if (r.kind == RefKind::C) fail(where + ": output " + to_string(r) + " used as an operand");
        if (r.kind == RefKind::T) {
            auto it = temp_group.find(r.id());
            if (it == temp_group.end()) fail(where + ": references undefined " + to_string(r));
            return it->second;
        }
        return group_of(r.kind);
    };

    for (std::size_t i = 0; i < n; ++i) {
        const Assignment& a = p.assignments[i];
        const std::string where = "assignment " + to_string(a.name);
        switch (a.name.kind) {
        case RefKind::U:
        case RefKind::V:
        case RefKind::W:
        case RefKind::T:
        case RefKind::C: break;
        default: fail(where + ": invalid assignment target");
        }
        if (a.name.kind == RefKind::C && a.name.index >= kEntries) fail(where + ": invalid output");
        if (!names.insert(a.name.id()).second) fail(where + " defined twice");
        if (a.rhs.kind == RefKind::Zero) fail(where + ": 0 is only allowed as the left operand");
        auto lg = operand_group(a.lhs, where);
        auto rg = operand_group(a.rhs, where);
        Group g;
        if (a.name.kind == RefKind::T) {
            g = *rg;
        } else {
            g = *group_of(a.name.kind);
        }
        if ((lg && *lg != g) || *rg != g)
            fail(where + ": operands must come from the " + std::string(group_name(g)) + " side");
        groups[i] = g;
        if (a.name.kind == RefKind::T) temp_group[a.name.id()] = g;
    }

    std::unordered_set<std::uint32_t> defined;
    for (int e = 0; e < kEntries; ++e) {
        defined.insert(a_entry(e).id());
        defined.insert(b_entry(e).id());
    }
    defined.insert(Ref{}.id());
    auto require = [&](Ref r, const std::string& where) {
        if (defined.count(r.id())) return;
        bool exists = names.count(r.id()) ||
                      (r.kind == RefKind::M && r.index < p.products.size());
        if (exists) fail(where + ": " + to_string(r) + " is used before its definition");
        fail(where + ": references undefined " + to_string(r));
    };
    auto run_phase = [&](bool input_side) {
        for (std::size_t i = 0; i < n; ++i) {
            if (is_input_side(groups[i]) != input_side) continue;
            const Assignment& a = p.assignments[i];
            const std::string where = "assignment " + to_string(a.name);
            require(a.lhs, where);
            require(a.rhs, where);
            defined.insert(a.name.id());
        }
    };

    run_phase(true);
    for (std::size_t k = 0; k < p.products.size(); ++k) {
        const Product& m = p.products[k];
        const std::string where = "product " + to_string(product_ref(static_cast<int>(k)));
        if (m.name != product_ref(static_cast<int>(k)))
            fail(where + ": expected name " + to_string(product_ref(static_cast<int>(k))) + ", got " +
                 to_string(m.name));
        auto lg = operand_group(m.left, where);
        auto rg = operand_group(m.right, where);
        if (lg && *lg != Group::U) fail(where + ": left operand must be a combination of A-entries");
        if (rg && *rg != Group::V) fail(where + ": right operand must be a combination of B-entries");
        require(m.left, where);
        require(m.right, where);
    }
    for (std::size_t k = 0; k < p.products.size(); ++k) defined.insert(product_ref(static_cast<int>(k)).id());
    run_phase(false);

    for (int e = 0; e < kEntries; ++e) {
        Ref r = p.outputs[e];
        const std::string where = "output " + to_string(output_ref(e));
        if (r.kind == RefKind::Zero) continue;
        if (r.kind == RefKind::C && r.index != e) fail(where + " refers to " + to_string(r));
        if (r.kind != RefKind::C) {
            auto g = operand_group(r, where);
            if (!g || *g != Group::W) fail(where + ": must be a combination of products");
        }
        require(r, where);
    }
    return groups;
}

OpCount count_operations(const Program& p) {
    OpCount c;
    for (const Assignment& a : p.assignments) (a.op == Op::Add ? c.adds : c.subs)++;
    c.adds_total = c.adds + c.subs;
    c.muls = static_cast<int>(p.products.size());
    return c;
}

namespace {

TermList combine(const TermList& x, const TermList& y, int sign) {
    TermList out;
    out.reserve(x.size() + y.size());
    auto i = x.begin(), j = y.begin();
    while (i != x.end() || j != y.end()) {
        if (j == y.end() || (i != x.end() && i->var < j->var)) {
            out.push_back(*i++);
        } else if (i == x.end() || j->var < i->var) {
            out.push_back({j->var, sign * j->sign});
            ++j;
        } else {
            int c = i->sign + sign * j->sign;
            if (c != 0) out.push_back({i->var, c});
            ++i;
            ++j;
        }
    }
    return out;
}

void require_ternary(const TermList& terms, const std::string& where) {
    for (const Term& t : terms)
        if (t.sign < -1 || t.sign > 1)
            throw NonTernaryExpansion(where + " expands to coefficient " + std::to_string(t.sign) + " on " +
                                      to_string(t.var));
}

} // namespace

FormSet expand(const Program& p) {
    std::vector<Group> groups = check_program(p);
    std::unordered_map<std::uint32_t, TermList> value;
    auto get = [&](Ref r) -> TermList {
        if (r.kind == RefKind::Zero) return {};
        auto it = value.find(r.id());
        if (it != value.end()) return it->second;
        return TermList{{r, 1}};
    };
    auto run_phase = [&](bool input_side) {
        for (std::size_t i = 0; i < p.assignments.size(); ++i) {
            if (is_input_side(groups[i]) != input_side) continue;
            const Assignment& a = p.assignments[i];
            value[a.name.id()] = combine(get(a.lhs), get(a.rhs), a.op == Op::Add ? 1 : -1);
        }
    };
    run_phase(true);
    FormSet fs;
    fs.rank = static_cast<int>(p.products.size());
    fs.forms.resize(2 * fs.rank + kEntries);
    for (int r = 0; r < fs.rank; ++r) {
        const std::string m = to_string(product_ref(r));
        fs.u_form(r) = {Group::U, get(p.products[r].left)};
        fs.v_form(r) = {Group::V, get(p.products[r].right)};
        require_ternary(fs.u_form(r).terms, "left operand of " + m);
        require_ternary(fs.v_form(r).terms, "right operand of " + m);
    }
    run_phase(false);
    for (int e = 0; e < kEntries; ++e) {
        fs.w_form(e) = {Group::W, get(p.outputs[e])};
        require_ternary(fs.w_form(e).terms, "output " + to_string(output_ref(e)));
    }
    return fs;
}

Program program_from_forms(const FormSet& fs) {
    ProgramSketch s;
    for (int r = 0; r < fs.rank; ++r) s.operands.push_back({fs.u_form(r).terms, fs.v_form(r).terms});
    for (int e = 0; e < kEntries; ++e) s.outputs[e] = fs.w_form(e).terms;
    return lower(s);
}

Scheme scheme_of(const Program& p) { return scheme_from_forms(expand(p)); }

std::array<int, 3> intermediate_counts(const Program& p) {
    std::array<int, 3> counts{};
    for (const Assignment& a : p.assignments) {
        if (a.name.kind == RefKind::U) ++counts[0];
        if (a.name.kind == RefKind::V) ++counts[1];
        if (a.name.kind == RefKind::W) ++counts[2];
    }
    return counts;
}

ProgramEvaluator::ProgramEvaluator(const Program& p) {
    std::vector<Group> groups = check_program(p);
    std::unordered_map<std::uint32_t, int> slot;
    // Slot 0 holds zero, then a11..a33, b11..b33.
    slot[Ref{}.id()] = 0;
    for (int e = 0; e < kEntries; ++e) {
        slot[a_entry(e).id()] = 1 + e;
        slot[b_entry(e).id()] = 1 + kEntries + e;
    }
    slots_ = 1 + 2 * kEntries;
    auto add_phase = [&](bool input_side) {
        for (std::size_t i = 0; i < p.assignments.size(); ++i) {
            if (is_input_side(groups[i]) != input_side) continue;
            const Assignment& a = p.assignments[i];
            int dst = slots_++;
            steps_.push_back({a.op == Op::Add ? Step::Add : Step::Sub, dst, slot.at(a.lhs.id()), slot.at(a.rhs.id())});
            slot[a.name.id()] = dst;
        }
    };
    add_phase(true);
    for (const Product& m : p.products) {
        int dst = slots_++;
        steps_.push_back({Step::Mul, dst, slot.at(m.left.id()), slot.at(m.right.id())});
        slot[m.name.id()] = dst;
    }
    add_phase(false);
    for (int e = 0; e < kEntries; ++e) outputs_[e] = slot.at(p.outputs[e].id());
}

Matrix3 ProgramEvaluator::operator()(const Matrix3& a, const Matrix3& b) const {
    std::vector<std::int64_t> v(slots_, 0);
    std::copy(a.begin(), a.end(), v.begin() + 1);
    std::copy(b.begin(), b.end(), v.begin() + 1 + kEntries);
    for (const Step& s : steps_) {
        switch (s.kind) {
        case Step::Add: v[s.dst] = v[s.lhs] + v[s.rhs]; break;
        case Step::Sub: v[s.dst] = v[s.lhs] - v[s.rhs]; break;
        case Step::Mul: v[s.dst] = v[s.lhs] * v[s.rhs]; break;
        }
    }
    Matrix3 c{};
    for (int e = 0; e < kEntries; ++e) c[e] = v[outputs_[e]];
    return c;
}

Matrix3 evaluate(const Program& p, const Matrix3& a, const Matrix3& b) { return ProgramEvaluator(p)(a, b); }

} // namespace mm3
