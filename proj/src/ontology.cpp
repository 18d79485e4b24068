#include "oreach/ontology.hpp"

#include <algorithm>

namespace oreach {

concept_expr concept_expr::conj(std::vector<std::uint32_t> names) {
    concept_expr c;
    c.k = kind::conjunction;
    c.conjuncts = std::move(names);
    return c;
}

concept_expr concept_expr::some(role_expr r) {
    concept_expr c;
    c.k = kind::some_top;
    c.role = r;
    return c;
}

concept_expr concept_expr::some(role_expr r, std::uint32_t concept_name) {
    concept_expr c;
    c.k = kind::some_qualified;
    c.role = r;
    c.qualifier = concept_name;
    return c;
}

literal assertion::to_literal() const {
    term ta = term{false, a};
    switch (k) {
    case kind::concept_assert:
        return literal{atom::concept_app(symbol{symbol_kind::concept_name, pred}, ta), positive};
    case kind::role_assert:
        return literal{atom::role_app(symbol{symbol_kind::role_name, pred}, ta, term{false, b}),
                       positive};
    case kind::equality_assert:
        return literal{atom::equality(ta, term{false, b}), positive};
    }
    return literal{};
}

signature ontology::sig() const {
    signature s;
    for (const auto& ax : tbox) {
        if (const auto* ci = std::get_if<concept_inclusion>(&ax)) {
            switch (ci->lhs.k) {
            case concept_expr::kind::conjunction:
                for (auto c : ci->lhs.conjuncts)
                    s.concepts.insert(c);
                break;
            case concept_expr::kind::some_qualified:
                s.concepts.insert(ci->lhs.qualifier);
                [[fallthrough]];
            case concept_expr::kind::some_top:
                s.roles.insert(ci->lhs.role.role);
                break;
            }
            s.concepts.insert(ci->rhs_concept);
        } else {
            const auto& ri = std::get<role_inclusion>(ax);
            s.roles.insert(ri.lhs.role);
            s.roles.insert(ri.rhs.role);
        }
    }
    for (const auto& as : abox) {
        switch (as.k) {
        case assertion::kind::concept_assert:
            s.concepts.insert(as.pred);
            s.individuals.insert(as.a);
            break;
        case assertion::kind::role_assert:
            s.roles.insert(as.pred);
            s.individuals.insert(as.a);
            s.individuals.insert(as.b);
            break;
        case assertion::kind::equality_assert:
            s.individuals.insert(as.a);
            s.individuals.insert(as.b);
            break;
        }
    }
    return s;
}

namespace {

literal role_occurrence(role_expr r, term x, term y, bool positive) {
    symbol p{symbol_kind::role_name, r.role};
    return literal{r.inverse ? atom::role_app(p, y, x) : atom::role_app(p, x, y), positive};
}

} // namespace

clause universal_clause::instantiate(term x, term y) const {
    std::vector<literal> lits;
    symbol rhs{symbol_kind::concept_name, rhs_concept};
    switch (s) {
    case shape::concept_subsumption:
        for (auto c : lhs_concepts)
            lits.push_back(literal{atom::concept_app(symbol{symbol_kind::concept_name, c}, x), false});
        lits.push_back(literal{atom::concept_app(rhs, x), !rhs_negated});
        break;
    case shape::role_domain:
        lits.push_back(role_occurrence(r1, x, y, false));
        lits.push_back(literal{atom::concept_app(rhs, x), !rhs_negated});
        break;
    case shape::qualified_role_domain:
        lits.push_back(role_occurrence(r1, x, y, false));
        lits.push_back(literal{atom::concept_app(symbol{symbol_kind::concept_name, qualifier}, y), false});
        lits.push_back(literal{atom::concept_app(rhs, x), !rhs_negated});
        break;
    case shape::role_subsumption:
        lits.push_back(role_occurrence(r1, x, y, false));
        lits.push_back(role_occurrence(r2, x, y, true));
        break;
    case shape::role_disjointness:
        lits.push_back(role_occurrence(r1, x, y, false));
        lits.push_back(role_occurrence(r2, x, y, false));
        break;
    }
    return clause{std::move(lits)};
}

signature universal_theory::sig() const {
    signature s;
    for (const auto& c : clauses) {
        switch (c.s) {
        case universal_clause::shape::concept_subsumption:
            for (auto a : c.lhs_concepts)
                s.concepts.insert(a);
            s.concepts.insert(c.rhs_concept);
            break;
        case universal_clause::shape::role_domain:
            s.roles.insert(c.r1.role);
            s.concepts.insert(c.rhs_concept);
            break;
        case universal_clause::shape::qualified_role_domain:
            s.roles.insert(c.r1.role);
            s.concepts.insert(c.qualifier);
            s.concepts.insert(c.rhs_concept);
            break;
        case universal_clause::shape::role_subsumption:
        case universal_clause::shape::role_disjointness:
            s.roles.insert(c.r1.role);
            s.roles.insert(c.r2.role);
            break;
        }
    }
    for (const auto& l : ground)
        s.merge(sig_of(l));
    return s;
}

std::vector<std::string> validate(const ontology& o, const vocab& v) {
    std::vector<std::string> diags;
    auto check_concept = [&](std::uint32_t id, const char* where) {
        if (id >= v.count(symbol_kind::concept_name))
            diags.push_back(std::string("unknown concept id in ") + where);
    };
    auto check_role = [&](std::uint32_t id, const char* where) {
        if (id >= v.count(symbol_kind::role_name))
            diags.push_back(std::string("unknown role id in ") + where);
    };
    auto check_ind = [&](std::uint32_t id, const char* where) {
        if (id >= v.count(symbol_kind::individual))
            diags.push_back(std::string("unknown individual id in ") + where);
    };
    for (const auto& ax : o.tbox) {
        if (const auto* ci = std::get_if<concept_inclusion>(&ax)) {
            switch (ci->lhs.k) {
            case concept_expr::kind::conjunction:
                if (ci->lhs.conjuncts.empty())
                    diags.push_back("concept conjunction must have at least one conjunct");
                for (auto c : ci->lhs.conjuncts)
                    check_concept(c, "concept inclusion lhs");
                break;
            case concept_expr::kind::some_qualified:
                check_concept(ci->lhs.qualifier, "qualified existential");
                [[fallthrough]];
            case concept_expr::kind::some_top:
                check_role(ci->lhs.role.role, "existential restriction");
                break;
            }
            check_concept(ci->rhs_concept, "concept inclusion rhs");
        } else {
            const auto& ri = std::get<role_inclusion>(ax);
            check_role(ri.lhs.role, "role inclusion lhs");
            check_role(ri.rhs.role, "role inclusion rhs");
        }
    }
    for (const auto& as : o.abox) {
        switch (as.k) {
        case assertion::kind::concept_assert:
            check_concept(as.pred, "assertion");
            check_ind(as.a, "assertion");
            break;
        case assertion::kind::role_assert:
            check_role(as.pred, "assertion");
            check_ind(as.a, "assertion");
            check_ind(as.b, "assertion");
            break;
        case assertion::kind::equality_assert:
            check_ind(as.a, "assertion");
            check_ind(as.b, "assertion");
            break;
        }
    }
    return diags;
}

universal_theory standard_translate(const ontology& o) {
    universal_theory t;
    t.clauses.reserve(o.tbox.size());
    for (const auto& ax : o.tbox) {
        universal_clause uc;
        if (const auto* ci = std::get_if<concept_inclusion>(&ax)) {
            uc.rhs_concept = ci->rhs_concept;
            uc.rhs_negated = ci->rhs_negated;
            switch (ci->lhs.k) {
            case concept_expr::kind::conjunction:
                uc.s = universal_clause::shape::concept_subsumption;
                uc.lhs_concepts = ci->lhs.conjuncts;
                break;
            case concept_expr::kind::some_top:
                uc.s = universal_clause::shape::role_domain;
                uc.r1 = ci->lhs.role;
                break;
            case concept_expr::kind::some_qualified:
                uc.s = universal_clause::shape::qualified_role_domain;
                uc.r1 = ci->lhs.role;
                uc.qualifier = ci->lhs.qualifier;
                break;
            }
        } else {
            const auto& ri = std::get<role_inclusion>(ax);
            uc.s = ri.rhs_negated ? universal_clause::shape::role_disjointness
                                  : universal_clause::shape::role_subsumption;
            uc.r1 = ri.lhs;
            uc.r2 = ri.rhs;
        }
        t.clauses.push_back(std::move(uc));
    }
    t.ground.reserve(o.abox.size());
    for (const auto& as : o.abox)
        t.ground.push_back(as.to_literal());
    return t;
}

ontology undefined_value_closure(const ontology& o, symbol u) {
    ontology out = o;
    signature s = o.sig();
    std::vector<std::uint32_t> individuals(s.individuals.begin(), s.individuals.end());
    if (std::find(individuals.begin(), individuals.end(), u.id) == individuals.end())
        individuals.push_back(u.id);

    auto add = [&](const assertion& a) {
        if (std::find(out.abox.begin(), out.abox.end(), a) == out.abox.end())
            out.abox.push_back(a);
    };
    for (auto c : s.concepts) {
        assertion a;
        a.k = assertion::kind::concept_assert;
        a.positive = false;
        a.pred = c;
        a.a = u.id;
        add(a);
    }
    for (auto r : s.roles) {
        for (auto i : individuals) {
            assertion fwd;
            fwd.k = assertion::kind::role_assert;
            fwd.positive = false;
            fwd.pred = r;
            fwd.a = u.id;
            fwd.b = i;
            add(fwd);
            assertion bwd = fwd;
            bwd.a = i;
            bwd.b = u.id;
            add(bwd);
        }
    }
    return out;
}

std::string to_string(const universal_clause& c, const vocab& v) {
    auto cname = [&](std::uint32_t id) { return v.name(symbol{symbol_kind::concept_name, id}); };
    auto rocc = [&](role_expr r, const char* x, const char* y) {
        std::string n = v.name(symbol{symbol_kind::role_name, r.role});
        return r.inverse ? n + "(" + y + "," + x + ")" : n + "(" + x + "," + y + ")";
    };
    std::string lambda = (c.rhs_negated ? "!" : "") + cname(c.rhs_concept) + "(x)";
    switch (c.s) {
    case universal_clause::shape::concept_subsumption: {
        std::string lhs;
        for (std::size_t i = 0; i < c.lhs_concepts.size(); ++i) {
            if (i)
                lhs += " & ";
            lhs += cname(c.lhs_concepts[i]) + "(x)";
        }
        return "forall x (" + lhs + " -> " + lambda + ")";
    }
    case universal_clause::shape::role_domain:
        return "forall x,y (" + rocc(c.r1, "x", "y") + " -> " + lambda + ")";
    case universal_clause::shape::qualified_role_domain:
        return "forall x,y (" + rocc(c.r1, "x", "y") + " & " + cname(c.qualifier) + "(y) -> " +
               lambda + ")";
    case universal_clause::shape::role_subsumption:
        return "forall x,y (" + rocc(c.r1, "x", "y") + " -> " + rocc(c.r2, "x", "y") + ")";
    case universal_clause::shape::role_disjointness:
        return "forall x,y (" + rocc(c.r1, "x", "y") + " -> !" + rocc(c.r2, "x", "y") + ")";
    }
    return "?";
}

std::string to_string(const tbox_axiom& ax, const vocab& v) {
    auto cname = [&](std::uint32_t id) { return v.name(symbol{symbol_kind::concept_name, id}); };
    auto rname = [&](role_expr r) {
        return v.name(symbol{symbol_kind::role_name, r.role}) + (r.inverse ? "-" : "");
    };
    if (const auto* ci = std::get_if<concept_inclusion>(&ax)) {
        std::string lhs;
        switch (ci->lhs.k) {
        case concept_expr::kind::conjunction:
            for (std::size_t i = 0; i < ci->lhs.conjuncts.size(); ++i) {
                if (i)
                    lhs += " & ";
                lhs += cname(ci->lhs.conjuncts[i]);
            }
            break;
        case concept_expr::kind::some_top:
            lhs = "exists " + rname(ci->lhs.role);
            break;
        case concept_expr::kind::some_qualified:
            lhs = "exists " + rname(ci->lhs.role) + "." + cname(ci->lhs.qualifier);
            break;
        }
        return lhs + " <= " + (ci->rhs_negated ? "not " : "") + cname(ci->rhs_concept);
    }
    const auto& ri = std::get<role_inclusion>(ax);
    return rname(ri.lhs) + " <= " + (ri.rhs_negated ? "not " : "") + rname(ri.rhs);
}

std::string to_string(const assertion& a, const vocab& v) {
    auto iname = [&](std::uint32_t id) { return v.name(symbol{symbol_kind::individual, id}); };
    switch (a.k) {
    case assertion::kind::concept_assert:
        return std::string(a.positive ? "" : "not ") +
               v.name(symbol{symbol_kind::concept_name, a.pred}) + "(" + iname(a.a) + ")";
    case assertion::kind::role_assert:
        return std::string(a.positive ? "" : "not ") +
               v.name(symbol{symbol_kind::role_name, a.pred}) + "(" + iname(a.a) + "," +
               iname(a.b) + ")";
    case assertion::kind::equality_assert:
        return iname(a.a) + (a.positive ? " = " : " != ") + iname(a.b);
    }
    return "?";
}

} // namespace oreach
