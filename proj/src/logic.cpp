#include "oreach/logic.hpp"

#include <algorithm>
#include <cassert>

namespace oreach {

term term::var(symbol s) {
    assert(s.kind == symbol_kind::variable);
    return term{true, s.id};
}

term term::ind(symbol s) {
    assert(s.kind == symbol_kind::individual);
    return term{false, s.id};
}

atom atom::concept_app(symbol c, term t) {
    assert(c.kind == symbol_kind::concept_name);
    return atom{atom_kind::concept_app, c.id, t, term{}};
}

atom atom::role_app(symbol r, term t1, term t2) {
    assert(r.kind == symbol_kind::role_name);
    return atom{atom_kind::role_app, r.id, t1, t2};
}

atom atom::equality(term t1, term t2) {
    if (t2 < t1)
        std::swap(t1, t2);
    return atom{atom_kind::equality, 0, t1, t2};
}

void signature::merge(const signature& other) {
    concepts.insert(other.concepts.begin(), other.concepts.end());
    roles.insert(other.roles.begin(), other.roles.end());
    individuals.insert(other.individuals.begin(), other.individuals.end());
}

constraint::constraint(std::vector<literal> lits) {
    for (const auto& l : lits)
        push(l);
}

void constraint::push(const literal& l) {
    if (std::find(lits_.begin(), lits_.end(), l) == lits_.end())
        lits_.push_back(l);
}

bool constraint::has_complementary_pair() const {
    for (std::size_t i = 0; i < lits_.size(); ++i)
        for (std::size_t j = i + 1; j < lits_.size(); ++j)
            if (lits_[i].at == lits_[j].at && lits_[i].positive != lits_[j].positive)
                return true;
    return false;
}

bool constraint::subsumed_by(const constraint& other) const {
    for (const auto& l : other.lits_)
        if (std::find(lits_.begin(), lits_.end(), l) == lits_.end())
            return false;
    return true;
}

std::set<std::uint32_t> constraint::free_vars() const {
    std::set<std::uint32_t> out;
    for (const auto& l : lits_)
        for (auto v : oreach::free_vars(l.at))
            out.insert(v);
    return out;
}

qff constraint::to_qff() const {
    std::vector<qff> parts;
    parts.reserve(lits_.size());
    for (const auto& l : lits_)
        parts.push_back(qff::of(l));
    return qff::all_of(std::move(parts));
}

clause::clause(std::vector<literal> lits) : lits_(std::move(lits)) {
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
}

bool clause::is_tautological() const {
    for (std::size_t i = 0; i < lits_.size(); ++i)
        for (std::size_t j = i + 1; j < lits_.size(); ++j)
            if (lits_[i].at == lits_[j].at && lits_[i].positive != lits_[j].positive)
                return true;
    return false;
}

qff clause::to_qff() const {
    std::vector<qff> parts;
    parts.reserve(lits_.size());
    for (const auto& l : lits_)
        parts.push_back(qff::of(l));
    return qff::any_of(std::move(parts));
}

qff::qff() : node_(nullptr) {
    *this = top();
}

qff qff::top() {
    static const auto n = std::make_shared<const node>(node{node_kind::top, atom{}, {}});
    return qff(n);
}

qff qff::bottom() {
    static const auto n = std::make_shared<const node>(node{node_kind::bottom, atom{}, {}});
    return qff(n);
}

qff qff::of(const atom& a) {
    return qff(std::make_shared<const node>(node{node_kind::atom_node, a, {}}));
}

qff qff::of(const literal& l) {
    qff a = of(l.at);
    return l.positive ? a : neg(a);
}

qff qff::neg(const qff& f) {
    switch (f.kind()) {
    case node_kind::top: return bottom();
    case node_kind::bottom: return top();
    case node_kind::negation: return f.children()[0];
    default:
        return qff(std::make_shared<const node>(node{node_kind::negation, atom{}, {f}}));
    }
}

qff qff::all_of(std::vector<qff> fs) {
    std::vector<qff> kids;
    for (auto& f : fs) {
        if (f.is_false())
            return bottom();
        if (f.is_true())
            continue;
        if (f.kind() == node_kind::conjunction) {
            for (const auto& k : f.children())
                kids.push_back(k);
        } else {
            kids.push_back(std::move(f));
        }
    }
    if (kids.empty())
        return top();
    if (kids.size() == 1)
        return kids[0];
    return qff(std::make_shared<const node>(node{node_kind::conjunction, atom{}, std::move(kids)}));
}

qff qff::any_of(std::vector<qff> fs) {
    std::vector<qff> kids;
    for (auto& f : fs) {
        if (f.is_true())
            return top();
        if (f.is_false())
            continue;
        if (f.kind() == node_kind::disjunction) {
            for (const auto& k : f.children())
                kids.push_back(k);
        } else {
            kids.push_back(std::move(f));
        }
    }
    if (kids.empty())
        return bottom();
    if (kids.size() == 1)
        return kids[0];
    return qff(std::make_shared<const node>(node{node_kind::disjunction, atom{}, std::move(kids)}));
}

namespace {

bool structurally_equal(const qff& a, const qff& b) {
    if (a.kind() != b.kind())
        return false;
    switch (a.kind()) {
    case qff::node_kind::top:
    case qff::node_kind::bottom:
        return true;
    case qff::node_kind::atom_node:
        return a.atom_of() == b.atom_of();
    default: {
        const auto& ka = a.children();
        const auto& kb = b.children();
        if (ka.size() != kb.size())
            return false;
        for (std::size_t i = 0; i < ka.size(); ++i)
            if (!structurally_equal(ka[i], kb[i]))
                return false;
        return true;
    }
    }
}

} // namespace

bool qff::same_as(const qff& other) const {
    if (node_ == other.node_)
        return true;
    return structurally_equal(*this, other);
}

term substitute(term t, const substitution& sigma) {
    if (!t.is_variable)
        return t;
    auto it = sigma.find(t.id);
    return it == sigma.end() ? t : it->second;
}

atom substitute(const atom& a, const substitution& sigma) {
    switch (a.kind) {
    case atom_kind::concept_app:
        return atom{atom_kind::concept_app, a.pred, substitute(a.lhs, sigma), term{}};
    case atom_kind::role_app:
        return atom{atom_kind::role_app, a.pred, substitute(a.lhs, sigma), substitute(a.rhs, sigma)};
    case atom_kind::equality:
        return atom::equality(substitute(a.lhs, sigma), substitute(a.rhs, sigma));
    }
    return a;
}

literal substitute(const literal& l, const substitution& sigma) {
    return literal{substitute(l.at, sigma), l.positive};
}

constraint substitute(const constraint& c, const substitution& sigma) {
    constraint out;
    for (const auto& l : c.literals())
        out.push(substitute(l, sigma));
    return out;
}

qff substitute(const qff& f, const substitution& sigma) {
    switch (f.kind()) {
    case qff::node_kind::top:
    case qff::node_kind::bottom:
        return f;
    case qff::node_kind::atom_node:
        return qff::of(substitute(f.atom_of(), sigma));
    case qff::node_kind::negation:
        return qff::neg(substitute(f.children()[0], sigma));
    case qff::node_kind::conjunction:
    case qff::node_kind::disjunction: {
        std::vector<qff> kids;
        kids.reserve(f.children().size());
        for (const auto& k : f.children())
            kids.push_back(substitute(k, sigma));
        return f.kind() == qff::node_kind::conjunction ? qff::all_of(std::move(kids))
                                                       : qff::any_of(std::move(kids));
    }
    }
    return f;
}

std::set<std::uint32_t> free_vars(const atom& a) {
    std::set<std::uint32_t> out;
    if (a.lhs.is_variable)
        out.insert(a.lhs.id);
    if (a.kind != atom_kind::concept_app && a.rhs.is_variable)
        out.insert(a.rhs.id);
    return out;
}

std::set<std::uint32_t> free_vars(const qff& f) {
    std::set<std::uint32_t> out;
    switch (f.kind()) {
    case qff::node_kind::top:
    case qff::node_kind::bottom:
        break;
    case qff::node_kind::atom_node:
        out = free_vars(f.atom_of());
        break;
    default:
        for (const auto& k : f.children())
            for (auto v : free_vars(k))
                out.insert(v);
    }
    return out;
}

signature sig_of(const term& t) {
    signature s;
    if (!t.is_variable)
        s.individuals.insert(t.id);
    return s;
}

signature sig_of(const atom& a) {
    signature s;
    switch (a.kind) {
    case atom_kind::concept_app:
        s.concepts.insert(a.pred);
        s.merge(sig_of(a.lhs));
        break;
    case atom_kind::role_app:
        s.roles.insert(a.pred);
        s.merge(sig_of(a.lhs));
        s.merge(sig_of(a.rhs));
        break;
    case atom_kind::equality:
        s.merge(sig_of(a.lhs));
        s.merge(sig_of(a.rhs));
        break;
    }
    return s;
}

signature sig_of(const literal& l) {
    return sig_of(l.at);
}

signature sig_of(const constraint& c) {
    signature s;
    for (const auto& l : c.literals())
        s.merge(sig_of(l));
    return s;
}

signature sig_of(const qff& f) {
    signature s;
    switch (f.kind()) {
    case qff::node_kind::top:
    case qff::node_kind::bottom:
        break;
    case qff::node_kind::atom_node:
        s = sig_of(f.atom_of());
        break;
    default:
        for (const auto& k : f.children())
            s.merge(sig_of(k));
    }
    return s;
}

namespace {

// NNF-directed DNF with a running literal budget. `positive` tracks negation
// parity so no intermediate NNF tree is materialised.
void dnf_rec(const qff& f, bool positive, std::vector<constraint>& out, std::size_t budget,
             std::size_t& used) {
    auto charge = [&](std::size_t n) {
        used += n;
        if (used > budget)
            throw resource_error("to_dnf: literal budget exceeded");
    };
    switch (f.kind()) {
    case qff::node_kind::top:
        if (positive)
            out.push_back(constraint{});
        return;
    case qff::node_kind::bottom:
        if (!positive)
            out.push_back(constraint{});
        return;
    case qff::node_kind::atom_node:
        charge(1);
        out.push_back(constraint{{literal{f.atom_of(), positive}}});
        return;
    case qff::node_kind::negation:
        dnf_rec(f.children()[0], !positive, out, budget, used);
        return;
    case qff::node_kind::conjunction:
    case qff::node_kind::disjunction: {
        bool conjunctive = (f.kind() == qff::node_kind::conjunction) == positive;
        if (!conjunctive) {
            for (const auto& k : f.children())
                dnf_rec(k, positive, out, budget, used);
            return;
        }
        std::vector<constraint> acc{constraint{}};
        for (const auto& k : f.children()) {
            std::vector<constraint> part;
            dnf_rec(k, positive, part, budget, used);
            std::vector<constraint> next;
            for (const auto& a : acc) {
                for (const auto& p : part) {
                    constraint merged = a;
                    for (const auto& l : p.literals())
                        merged.push(l);
                    if (merged.has_complementary_pair())
                        continue;
                    charge(merged.size());
                    next.push_back(std::move(merged));
                }
            }
            acc = std::move(next);
            if (acc.empty())
                break;
        }
        for (auto& c : acc)
            out.push_back(std::move(c));
        return;
    }
    }
}

} // namespace

std::vector<constraint> to_dnf(const qff& f, std::size_t literal_budget) {
    std::vector<constraint> raw;
    std::size_t used = 0;
    dnf_rec(f, true, raw, literal_budget, used);
    // Drop contradictory cubes and duplicates; keep first-seen order.
    std::vector<constraint> out;
    for (auto& c : raw) {
        if (c.has_complementary_pair())
            continue;
        bool dup = false;
        for (const auto& seen : out) {
            if (seen.size() == c.size() && c.subsumed_by(seen) && seen.subsumed_by(c)) {
                dup = true;
                break;
            }
        }
        if (!dup)
            out.push_back(std::move(c));
    }
    return out;
}

bool eval_propositional(const qff& f, const std::function<bool(const atom&)>& val) {
    switch (f.kind()) {
    case qff::node_kind::top: return true;
    case qff::node_kind::bottom: return false;
    case qff::node_kind::atom_node: return val(f.atom_of());
    case qff::node_kind::negation: return !eval_propositional(f.children()[0], val);
    case qff::node_kind::conjunction:
        for (const auto& k : f.children())
            if (!eval_propositional(k, val))
                return false;
        return true;
    case qff::node_kind::disjunction:
        for (const auto& k : f.children())
            if (eval_propositional(k, val))
                return true;
        return false;
    }
    return false;
}

std::vector<atom> atoms_of(const qff& f) {
    std::vector<atom> out;
    auto visit = [&](auto&& self, const qff& g) -> void {
        switch (g.kind()) {
        case qff::node_kind::atom_node:
            if (std::find(out.begin(), out.end(), g.atom_of()) == out.end())
                out.push_back(g.atom_of());
            break;
        case qff::node_kind::top:
        case qff::node_kind::bottom:
            break;
        default:
            for (const auto& k : g.children())
                self(self, k);
        }
    };
    visit(visit, f);
    return out;
}

std::string to_string(const term& t, const vocab& v) {
    return v.name(t.sym());
}

std::string to_string(const atom& a, const vocab& v) {
    switch (a.kind) {
    case atom_kind::concept_app:
        return v.name(symbol{symbol_kind::concept_name, a.pred}) + "(" + to_string(a.lhs, v) + ")";
    case atom_kind::role_app:
        return v.name(symbol{symbol_kind::role_name, a.pred}) + "(" + to_string(a.lhs, v) + "," +
               to_string(a.rhs, v) + ")";
    case atom_kind::equality:
        return to_string(a.lhs, v) + " = " + to_string(a.rhs, v);
    }
    return "?";
}

std::string to_string(const literal& l, const vocab& v) {
    if (l.positive)
        return to_string(l.at, v);
    if (l.at.kind == atom_kind::equality)
        return to_string(l.at.lhs, v) + " != " + to_string(l.at.rhs, v);
    return "!" + to_string(l.at, v);
}

std::string to_string(const constraint& c, const vocab& v) {
    if (c.empty())
        return "true";
    std::string out;
    for (std::size_t i = 0; i < c.literals().size(); ++i) {
        if (i)
            out += " & ";
        out += to_string(c.literals()[i], v);
    }
    return out;
}

std::string to_string(const qff& f, const vocab& v) {
    switch (f.kind()) {
    case qff::node_kind::top: return "true";
    case qff::node_kind::bottom: return "false";
    case qff::node_kind::atom_node: return to_string(f.atom_of(), v);
    case qff::node_kind::negation: {
        const qff& k = f.children()[0];
        if (k.kind() == qff::node_kind::atom_node && k.atom_of().kind == atom_kind::equality)
            return to_string(k.atom_of().lhs, v) + " != " + to_string(k.atom_of().rhs, v);
        return "!(" + to_string(k, v) + ")";
    }
    case qff::node_kind::conjunction:
    case qff::node_kind::disjunction: {
        std::string op = f.kind() == qff::node_kind::conjunction ? " & " : " | ";
        std::string out;
        for (std::size_t i = 0; i < f.children().size(); ++i) {
            if (i)
                out += op;
            const qff& k = f.children()[i];
            bool paren = k.kind() == qff::node_kind::conjunction ||
                         k.kind() == qff::node_kind::disjunction;
            out += paren ? "(" + to_string(k, v) + ")" : to_string(k, v);
        }
        return out;
    }
    }
    return "?";
}

} // namespace oreach
