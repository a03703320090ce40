#include "mm3/cse.hpp"

#include <algorithm>
#include <cstdint>

namespace mm3 {

namespace {

std::uint64_t pair_key(Ref x, Ref y, int relative_sign) {
    return (static_cast<std::uint64_t>(x.id()) << 21) | (static_cast<std::uint64_t>(y.id()) << 1) |
           (relative_sign < 0 ? 1u : 0u);
}

Ref ref_from_id(std::uint64_t id) {
    return {static_cast<RefKind>(id >> 16), static_cast<std::uint16_t>(id & 0xffff)};
}

const Term* find_term(const TermList& terms, Ref var) {
    auto it = std::lower_bound(terms.begin(), terms.end(), var,
                               [](const Term& t, Ref v) { return t.var < v; });
    return (it != terms.end() && it->var == var) ? &*it : nullptr;
}

int cost(int size, int positives) {
    if (size == 0) return 0;
    return size - 1 + (positives == 0 ? 1 : 0);
}

int positives(const TermList& terms) {
    return static_cast<int>(std::count_if(terms.begin(), terms.end(), [](const Term& t) { return t.sign > 0; }));
}

RefKind intermediate_kind(Group g) {
    switch (g) {
    case Group::U: return RefKind::U;
    case Group::V: return RefKind::V;
    case Group::W: return RefKind::W;
    }
    return RefKind::U;
}

// An intermediate t = lhs (+/-) rhs; in a matching form the pair becomes
// `sign_from` (the sign the form gives to lhs) times t.
struct Orientation {
    Ref lhs;
    Ref rhs;
};

int gain(const std::vector<Form>& forms, Group group, const Candidate& c, const Orientation& o) {
    int total = -1; // the definition of t itself
    for (const Form& f : forms) {
        if (f.group != group) continue;
        const Term* tx = find_term(f.terms, c.x);
        if (!tx) continue;
        const Term* ty = find_term(f.terms, c.y);
        if (!ty || tx->sign * ty->sign != c.relative_sign) continue;
        const int k = static_cast<int>(f.terms.size());
        const int p = positives(f.terms);
        const int s_new = (o.lhs == c.x ? tx->sign : ty->sign);
        const int p_after = p - (tx->sign > 0) - (ty->sign > 0) + (s_new > 0);
        total += cost(k, p) - cost(k - 1, p_after);
    }
    return total;
}

void rewrite(std::vector<Form>& forms, Group group, const Candidate& c, const Orientation& o, Ref t) {
    for (Form& f : forms) {
        if (f.group != group) continue;
        const Term* tx = find_term(f.terms, c.x);
        if (!tx) continue;
        const Term* ty = find_term(f.terms, c.y);
        if (!ty || tx->sign * ty->sign != c.relative_sign) continue;
        const int s_new = (o.lhs == c.x ? tx->sign : ty->sign);
        std::erase_if(f.terms, [&](const Term& term) { return term.var == c.x || term.var == c.y; });
        auto pos = std::lower_bound(f.terms.begin(), f.terms.end(), t,
                                    [](const Term& term, Ref v) { return term.var < v; });
        f.terms.insert(pos, Term{t, s_new});
    }
}

} // namespace

std::vector<Candidate> collect_candidates(const FormSet& fs) {
    std::vector<std::uint64_t> keys;
    for (const Form& f : fs.forms) {
        const TermList& t = f.terms;
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = i + 1; j < t.size(); ++j) {
                const Term& a = t[i].var < t[j].var ? t[i] : t[j];
                const Term& b = t[i].var < t[j].var ? t[j] : t[i];
                keys.push_back(pair_key(a.var, b.var, a.sign * b.sign));
            }
    }
    std::sort(keys.begin(), keys.end());
    std::vector<Candidate> out;
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        const int occurrences = static_cast<int>(j - i);
        if (occurrences >= 2) {
            const std::uint64_t k = keys[i];
            out.push_back({ref_from_id((k >> 21) & 0xfffff), ref_from_id((k >> 1) & 0xfffff),
                           (k & 1u) ? -1 : 1, occurrences});
        }
        i = j;
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Candidate& a, const Candidate& b) { return a.occurrences > b.occurrences; });
    return out;
}

Program GreedyIntersections::reduce(const FormSet& input) const {
    FormSet fs = input;
    for (Form& f : fs.forms)
        std::sort(f.terms.begin(), f.terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });

    ProgramSketch sketch;
    std::array<int, 3> counters{};

    for (;;) {
        bool applied = false;
        for (const Candidate& c : collect_candidates(fs)) {
            const Group group = *group_of(c.x.kind);
            Orientation forward{c.x, c.y};
            int best = gain(fs.forms, group, c, forward);
            Orientation chosen = forward;
            if (c.relative_sign < 0) {
                Orientation backward{c.y, c.x};
                int g = gain(fs.forms, group, c, backward);
                if (g > best) {
                    best = g;
                    chosen = backward;
                }
            }
            if (best < 1) continue;

            const int g = static_cast<int>(group);
            Ref t{intermediate_kind(group), static_cast<std::uint16_t>(counters[g]++)};
            sketch.named.push_back({t, c.relative_sign > 0 ? Op::Add : Op::Sub, chosen.lhs, chosen.rhs});
            rewrite(fs.forms, group, c, chosen, t);
            applied = true;
            break;
        }
        if (!applied) break;
    }

    for (int r = 0; r < fs.rank; ++r) sketch.operands.push_back({fs.u_form(r).terms, fs.v_form(r).terms});
    for (int e = 0; e < kEntries; ++e) sketch.outputs[e] = fs.w_form(e).terms;
    return lower(sketch);
}

Program greedy_reduce(const FormSet& fs) { return GreedyIntersections{}.reduce(fs); }

} // namespace mm3
