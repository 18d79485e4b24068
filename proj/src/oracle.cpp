#include "oreach/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>

namespace oreach {

namespace {

// splitmix64: deterministic across platforms, unlike <random> distributions.
struct rng {
    std::uint64_t state;
    explicit rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint32_t below(std::uint32_t n) { return n ? static_cast<std::uint32_t>(next() % n) : 0; }
    bool chance_percent(std::uint32_t p) { return next() % 100 < p; }
};

bool holds_unary(const finite_interpretation& i, std::uint32_t concept_id, std::uint32_t e,
                 bool positive) {
    return i.in_concept(concept_id, e) == positive;
}

bool role_occ_holds(const finite_interpretation& i, role_expr r, std::uint32_t x, std::uint32_t y) {
    return r.inverse ? i.in_role(r.role, y, x) : i.in_role(r.role, x, y);
}

bool clause_instance_holds(const finite_interpretation& i, const universal_clause& c,
                           std::uint32_t x, std::uint32_t y) {
    switch (c.s) {
    case universal_clause::shape::concept_subsumption: {
        for (auto a : c.lhs_concepts)
            if (!i.in_concept(a, x))
                return true;
        return holds_unary(i, c.rhs_concept, x, !c.rhs_negated);
    }
    case universal_clause::shape::role_domain:
        if (!role_occ_holds(i, c.r1, x, y))
            return true;
        return holds_unary(i, c.rhs_concept, x, !c.rhs_negated);
    case universal_clause::shape::qualified_role_domain:
        if (!role_occ_holds(i, c.r1, x, y) || !i.in_concept(c.qualifier, y))
            return true;
        return holds_unary(i, c.rhs_concept, x, !c.rhs_negated);
    case universal_clause::shape::role_subsumption:
        return !role_occ_holds(i, c.r1, x, y) || role_occ_holds(i, c.r2, x, y);
    case universal_clause::shape::role_disjointness:
        return !role_occ_holds(i, c.r1, x, y) || !role_occ_holds(i, c.r2, x, y);
    }
    return false;
}

} // namespace

bool check_model(const finite_interpretation& i, const universal_theory& t) {
    static const std::map<std::uint32_t, std::uint32_t> no_vars;
    for (const auto& c : t.clauses) {
        if (c.binary()) {
            for (auto x : i.domain)
                for (auto y : i.domain)
                    if (!clause_instance_holds(i, c, x, y))
                        return false;
        } else {
            for (auto x : i.domain)
                if (!clause_instance_holds(i, c, x, x))
                    return false;
        }
    }
    for (const auto& l : t.ground)
        if (!i.eval(l, no_vars))
            return false;
    return true;
}

namespace {

// Extension of a concept expression under plain DL semantics.
std::vector<std::uint32_t> concept_extension(const finite_interpretation& i,
                                             const concept_expr& c) {
    std::vector<std::uint32_t> out;
    for (auto d : i.domain) {
        bool in = false;
        switch (c.k) {
        case concept_expr::kind::conjunction:
            in = true;
            for (auto a : c.conjuncts)
                in = in && i.in_concept(a, d);
            break;
        case concept_expr::kind::some_top:
            for (auto e : i.domain)
                if (role_occ_holds(i, c.role, d, e)) {
                    in = true;
                    break;
                }
            break;
        case concept_expr::kind::some_qualified:
            for (auto e : i.domain)
                if (role_occ_holds(i, c.role, d, e) && i.in_concept(c.qualifier, e)) {
                    in = true;
                    break;
                }
            break;
        }
        if (in)
            out.push_back(d);
    }
    return out;
}

} // namespace

bool check_model_dl(const finite_interpretation& i, const ontology& o) {
    for (const auto& ax : o.tbox) {
        if (const auto* ci = std::get_if<concept_inclusion>(&ax)) {
            for (auto d : concept_extension(i, ci->lhs)) {
                bool rhs = i.in_concept(ci->rhs_concept, d);
                if (ci->rhs_negated ? rhs : !rhs)
                    return false;
            }
        } else {
            const auto& ri = std::get<role_inclusion>(ax);
            for (auto d : i.domain)
                for (auto e : i.domain) {
                    if (!role_occ_holds(i, ri.lhs, d, e))
                        continue;
                    bool rhs = role_occ_holds(i, ri.rhs, d, e);
                    if (ri.rhs_negated ? rhs : !rhs)
                        return false;
                }
        }
    }
    for (const auto& as : o.abox) {
        auto elem = [&](std::uint32_t ind) {
            auto it = i.constant_map.find(ind);
            if (it == i.constant_map.end())
                throw std::out_of_range("individual not interpreted");
            return it->second;
        };
        bool truth = false;
        switch (as.k) {
        case assertion::kind::concept_assert: truth = i.in_concept(as.pred, elem(as.a)); break;
        case assertion::kind::role_assert: truth = i.in_role(as.pred, elem(as.a), elem(as.b)); break;
        case assertion::kind::equality_assert: truth = elem(as.a) == elem(as.b); break;
        }
        if (truth != as.positive)
            return false;
    }
    return true;
}

enumeration_scope enumeration_scope::of(const universal_theory& t) {
    signature s = t.sig();
    return enumeration_scope{{s.concepts.begin(), s.concepts.end()},
                             {s.roles.begin(), s.roles.end()},
                             {s.individuals.begin(), s.individuals.end()}};
}

enumeration_scope enumeration_scope::of(const ontology& o) {
    signature s = o.sig();
    return enumeration_scope{{s.concepts.begin(), s.concepts.end()},
                             {s.roles.begin(), s.roles.end()},
                             {s.individuals.begin(), s.individuals.end()}};
}

bool enumerate_interpretations(const enumeration_scope& scope, std::uint32_t n,
                               const std::function<bool(const finite_interpretation&)>& visit,
                               std::uint64_t budget) {
    if (n == 0 || n > 6)
        throw std::invalid_argument("enumeration domain size must be in 1..6");
    std::uint64_t unary_bits = static_cast<std::uint64_t>(scope.concepts.size()) * n;
    std::uint64_t binary_bits = static_cast<std::uint64_t>(scope.roles.size()) * n * n;
    if (unary_bits > 48 || binary_bits > 48)
        throw resource_error("enumeration space too large");
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < scope.individuals.size(); ++k) {
        total *= n;
        if (total > budget)
            throw resource_error("enumeration budget exceeded");
    }
    double est = static_cast<double>(total) * static_cast<double>(1ull << unary_bits) *
                 static_cast<double>(1ull << binary_bits);
    if (est > static_cast<double>(budget))
        throw resource_error("enumeration budget exceeded");

    std::vector<std::uint32_t> cmap(scope.individuals.size(), 0);
    finite_interpretation base;
    for (std::uint32_t e = 0; e < n; ++e)
        base.add_element(e);

    for (;;) {
        for (std::size_t k = 0; k < scope.individuals.size(); ++k)
            base.constant_map[scope.individuals[k]] = cmap[k];
        for (std::uint64_t um = 0; um < (1ull << unary_bits); ++um) {
            base.concept_ext.clear();
            std::uint64_t bit = 0;
            for (auto c : scope.concepts)
                for (std::uint32_t e = 0; e < n; ++e, ++bit)
                    if (um >> bit & 1)
                        base.add_concept(c, e);
            for (std::uint64_t bm = 0; bm < (1ull << binary_bits); ++bm) {
                base.role_ext.clear();
                std::uint64_t rbit = 0;
                for (auto r : scope.roles)
                    for (std::uint32_t e1 = 0; e1 < n; ++e1)
                        for (std::uint32_t e2 = 0; e2 < n; ++e2, ++rbit)
                            if (bm >> rbit & 1)
                                base.add_role(r, e1, e2);
                if (!visit(base))
                    return false;
            }
        }
        // Next constant map.
        std::size_t k = 0;
        for (; k < cmap.size(); ++k) {
            if (++cmap[k] < n)
                break;
            cmap[k] = 0;
        }
        if (k == cmap.size())
            break;
    }
    return true;
}

bool enumerate_models(const universal_theory& t, const enumeration_scope& scope, std::uint32_t n,
                      const std::function<bool(const finite_interpretation&)>& visit,
                      std::uint64_t budget) {
    return enumerate_interpretations(
        scope, n,
        [&](const finite_interpretation& i) { return check_model(i, t) ? visit(i) : true; },
        budget);
}

namespace {

// --- decomposed bounded satisfiability ---------------------------------
//
// Elements are quotient classes of the named terms. Given a class partition
// and full concept extensions, every remaining binary clause instance
// mentions the role atoms of exactly one unordered class pair, so role
// feasibility decomposes pairwise.

struct sat_enum_problem {
    std::vector<std::uint32_t> concepts, roles; // symbol ids, dense positions
    std::vector<term> terms;                    // named constants
    std::vector<literal> facts;                 // ground + cube literals
    const universal_theory* theory = nullptr;

    std::size_t concept_pos(std::uint32_t id) const {
        return std::lower_bound(concepts.begin(), concepts.end(), id) - concepts.begin();
    }
    std::size_t role_pos(std::uint32_t id) const {
        return std::lower_bound(roles.begin(), roles.end(), id) - roles.begin();
    }
    std::size_t term_pos(const term& t) const {
        return std::find(terms.begin(), terms.end(), t) - terms.begin();
    }
};

// -1 unknown, 0 false, 1 true
using tri = signed char;

bool unary_ok(const sat_enum_problem& p, const std::vector<tri>& unary, std::uint32_t m,
              std::uint32_t cls) {
    // shape-(1) clauses for one class, once its bits are fixed.
    for (const auto& c : p.theory->clauses) {
        if (c.s != universal_clause::shape::concept_subsumption)
            continue;
        bool premise = true;
        for (auto a : c.lhs_concepts)
            premise = premise && unary[p.concept_pos(a) * m + cls] == 1;
        if (!premise)
            continue;
        tri rhs = unary[p.concept_pos(c.rhs_concept) * m + cls];
        if (rhs != (c.rhs_negated ? 0 : 1))
            return false;
    }
    return true;
}

// Checks all binary clause instances whose role atoms live on the ordered
// pairs (c,d) and (d,c), for one candidate assignment of those bits.
bool pair_ok(const sat_enum_problem& p, const std::vector<tri>& unary, std::uint32_t m,
             std::uint32_t c, std::uint32_t d, const std::vector<bool>& fwd,
             const std::vector<bool>& bwd) {
    auto unary_true = [&](std::uint32_t concept_id, std::uint32_t cls) {
        return unary[p.concept_pos(concept_id) * m + cls] == 1;
    };
    auto occ = [&](role_expr r, std::uint32_t x, std::uint32_t y) {
        // bit of P(x,y) with (x,y) in {(c,d),(d,c)}
        bool direct_cd = (!r.inverse && x == c && y == d) || (r.inverse && x == d && y == c);
        return direct_cd ? fwd[p.role_pos(r.role)] : bwd[p.role_pos(r.role)];
    };
    std::pair<std::uint32_t, std::uint32_t> insts[2] = {{c, d}, {d, c}};
    std::size_t ninst = (c == d) ? 1 : 2;
    for (const auto& uc : p.theory->clauses) {
        if (!uc.binary())
            continue;
        for (std::size_t k = 0; k < ninst; ++k) {
            auto [x, y] = insts[k];
            if (!occ(uc.r1, x, y))
                continue;
            switch (uc.s) {
            case universal_clause::shape::role_domain:
                if (unary_true(uc.rhs_concept, x) != !uc.rhs_negated)
                    return false;
                break;
            case universal_clause::shape::qualified_role_domain:
                if (unary_true(uc.qualifier, y) && unary_true(uc.rhs_concept, x) != !uc.rhs_negated)
                    return false;
                break;
            case universal_clause::shape::role_subsumption:
                if (!occ(uc.r2, x, y))
                    return false;
                break;
            case universal_clause::shape::role_disjointness:
                if (occ(uc.r2, x, y))
                    return false;
                break;
            default: break;
            }
        }
    }
    return true;
}

bool cube_satisfiable_over_partitions(const sat_enum_problem& p, std::uint64_t budget,
                                      std::uint64_t& used) {
    const std::size_t nt = p.terms.size();
    const std::size_t nc = p.concepts.size();
    const std::size_t nr = p.roles.size();
    std::vector<std::uint32_t> part(nt, 0);

    // Enumerate restricted growth strings (canonical set partitions).
    std::function<bool(std::size_t, std::uint32_t)> go = [&](std::size_t i,
                                                             std::uint32_t next_class) -> bool {
        if (++used > budget)
            throw resource_error("oracle enumeration budget exceeded");
        if (i == nt) {
            std::uint32_t m = next_class == 0 ? 1 : next_class; // nonempty domain
            // Forced bits from facts.
            std::vector<tri> unary(nc * m, -1);
            std::vector<tri> binary(nr * m * m, -1);
            for (const auto& l : p.facts) {
                const atom& a = l.at;
                if (a.kind == atom_kind::equality) {
                    bool same = part[p.term_pos(a.lhs)] == part[p.term_pos(a.rhs)];
                    if (same != l.positive)
                        return false;
                } else if (a.kind == atom_kind::concept_app) {
                    tri& cell = unary[p.concept_pos(a.pred) * m + part[p.term_pos(a.lhs)]];
                    tri want = l.positive ? 1 : 0;
                    if (cell != -1 && cell != want)
                        return false;
                    cell = want;
                } else {
                    std::uint32_t e1 = part[p.term_pos(a.lhs)], e2 = part[p.term_pos(a.rhs)];
                    tri& cell = binary[(p.role_pos(a.pred) * m + e1) * m + e2];
                    tri want = l.positive ? 1 : 0;
                    if (cell != -1 && cell != want)
                        return false;
                    cell = want;
                }
            }
            // Enumerate unary extensions class by class, pruning on shape (1).
            std::vector<tri> u = unary;
            std::function<bool(std::uint32_t)> fill = [&](std::uint32_t cls) -> bool {
                if (++used > budget)
                    throw resource_error("oracle enumeration budget exceeded");
                if (cls == m) {
                    // Role feasibility, pair by pair.
                    for (std::uint32_t c = 0; c < m; ++c)
                        for (std::uint32_t d = c; d < m; ++d) {
                            bool feasible = false;
                            std::size_t combos = 1ull << (c == d ? nr : 2 * nr);
                            used += combos;
                            if (used > budget)
                                throw resource_error("oracle enumeration budget exceeded");
                            for (std::size_t mask = 0; mask < combos && !feasible; ++mask) {
                                std::vector<bool> fwd(nr), bwd(nr);
                                for (std::size_t r = 0; r < nr; ++r) {
                                    fwd[r] = mask >> r & 1;
                                    bwd[r] = (c == d) ? fwd[r] : (mask >> (nr + r) & 1);
                                }
                                bool match = true;
                                for (std::size_t r = 0; r < nr && match; ++r) {
                                    tri f = binary[(r * m + c) * m + d];
                                    tri b = binary[(r * m + d) * m + c];
                                    if (f != -1 && f != (fwd[r] ? 1 : 0))
                                        match = false;
                                    if (b != -1 && b != (bwd[r] ? 1 : 0))
                                        match = false;
                                }
                                if (match && pair_ok(p, u, m, c, d, fwd, bwd))
                                    feasible = true;
                            }
                            if (!feasible)
                                return false;
                        }
                    return true;
                }
                // All combinations for this class's undetermined concept bits.
                std::vector<std::size_t> free_bits;
                for (std::size_t cp = 0; cp < nc; ++cp)
                    if (u[cp * m + cls] == -1)
                        free_bits.push_back(cp);
                for (std::uint64_t mask = 0; mask < (1ull << free_bits.size()); ++mask) {
                    for (std::size_t k = 0; k < free_bits.size(); ++k)
                        u[free_bits[k] * m + cls] = (mask >> k & 1) ? 1 : 0;
                    if (unary_ok(p, u, m, cls) && fill(cls + 1))
                        return true;
                }
                for (std::size_t cp : free_bits)
                    u[cp * m + cls] = -1;
                return false;
            };
            return fill(0);
        }
        for (std::uint32_t c = 0; c <= next_class; ++c) {
            part[i] = c;
            if (go(i + 1, std::max(next_class, c + 1)))
                return true;
        }
        return false;
    };
    return go(0, 0);
}

} // namespace

bool satisfiable_by_enumeration(const universal_theory& t, const qff& f, std::uint64_t budget) {
    signature st = t.sig();
    std::uint64_t used = 0;
    for (const auto& cube : to_dnf(f)) {
        sat_enum_problem p;
        p.theory = &t;
        signature s = st;
        s.merge(sig_of(cube));
        std::set<term> terms;
        for (auto ind : s.individuals)
            terms.insert(term{false, ind});
        for (auto v : cube.free_vars())
            terms.insert(term{true, v});
        if (terms.empty())
            terms.insert(term{true, 0xfffffffu}); // padding
        p.terms.assign(terms.begin(), terms.end());
        p.concepts.assign(s.concepts.begin(), s.concepts.end());
        p.roles.assign(s.roles.begin(), s.roles.end());
        if (p.terms.size() > 8)
            throw resource_error("oracle: too many named terms");
        p.facts = t.ground;
        for (const auto& l : cube.literals())
            p.facts.push_back(l);
        if (cube_satisfiable_over_partitions(p, budget, used))
            return true;
    }
    return false;
}

bool is_homomorphism(const morphism& m, const signature& sigma) {
    const auto& src = *m.source;
    const auto& dst = *m.target;
    for (auto d : src.domain) {
        auto it = m.element_map.find(d);
        if (it == m.element_map.end() || !dst.has_element(it->second))
            return false;
    }
    auto mu = [&](std::uint32_t e) { return m.element_map.at(e); };
    for (auto a : sigma.individuals) {
        auto is = src.constant_map.find(a);
        auto id = dst.constant_map.find(a);
        if (is == src.constant_map.end() || id == dst.constant_map.end())
            return false;
        if (mu(is->second) != id->second)
            return false;
    }
    for (auto c : sigma.concepts)
        for (auto d : src.domain)
            if (src.in_concept(c, d) && !dst.in_concept(c, mu(d)))
                return false;
    for (auto r : sigma.roles)
        for (auto d : src.domain)
            for (auto e : src.domain)
                if (src.in_role(r, d, e) && !dst.in_role(r, mu(d), mu(e)))
                    return false;
    return true;
}

bool is_embedding(const morphism& m, const signature& sigma) {
    if (!is_homomorphism(m, sigma))
        return false;
    const auto& src = *m.source;
    const auto& dst = *m.target;
    auto mu = [&](std::uint32_t e) { return m.element_map.at(e); };
    // Injectivity.
    std::set<std::uint32_t> image;
    for (auto d : src.domain)
        if (!image.insert(mu(d)).second)
            return false;
    // Atom reflection.
    for (auto c : sigma.concepts)
        for (auto d : src.domain)
            if (src.in_concept(c, d) != dst.in_concept(c, mu(d)))
                return false;
    for (auto r : sigma.roles)
        for (auto d : src.domain)
            for (auto e : src.domain)
                if (src.in_role(r, d, e) != dst.in_role(r, mu(d), mu(e)))
                    return false;
    return true;
}

bool is_substructure(const finite_interpretation& i0, const finite_interpretation& i,
                     const signature& sigma) {
    morphism m;
    m.source = &i0;
    m.target = &i;
    for (auto d : i0.domain) {
        if (!i.has_element(d))
            return false;
        m.element_map[d] = d;
    }
    return is_embedding(m, sigma);
}

finite_interpretation amalgamate(const finite_interpretation& i1, const finite_interpretation& i2,
                                 const finite_interpretation& i0, const signature& sigma) {
    if (!is_substructure(i0, i1, sigma) || !is_substructure(i0, i2, sigma))
        throw std::invalid_argument("amalgamate: shared structure is not a substructure of both");
    // Domains must intersect exactly in the shared structure.
    for (auto d : i1.domain)
        if (i2.has_element(d) && !i0.has_element(d))
            throw std::invalid_argument("amalgamate: domains intersect outside the shared part");

    finite_interpretation out;
    for (auto d : i1.domain)
        out.add_element(d);
    for (auto d : i2.domain)
        out.add_element(d);
    for (auto c : sigma.concepts) {
        for (auto d : i1.domain)
            if (i1.in_concept(c, d))
                out.add_concept(c, d);
        for (auto d : i2.domain)
            if (i2.in_concept(c, d))
                out.add_concept(c, d);
    }
    for (auto r : sigma.roles) {
        auto it1 = i1.role_ext.find(r);
        if (it1 != i1.role_ext.end())
            for (auto [a, b] : it1->second)
                out.add_role(r, a, b);
        auto it2 = i2.role_ext.find(r);
        if (it2 != i2.role_ext.end())
            for (auto [a, b] : it2->second)
                out.add_role(r, a, b);
    }
    out.constant_map = i1.constant_map;
    return out;
}

namespace {

std::uint32_t eval_update_term(const finite_interpretation& i, const update& u,
                               const std::map<std::uint32_t, std::uint32_t>& va) {
    if (!u.is_case)
        return i.eval_term(u.plain, va);
    for (std::size_t k = 0; k < u.cf.partition.cases.size(); ++k)
        if (i.eval(u.cf.partition.cases[k], va))
            return i.eval_term(u.cf.branch_terms[k], va);
    throw std::logic_error("case function: no case applies (partition not valid in this model)");
}

} // namespace

std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>>
step_successors(const finite_interpretation& i, const artifact_system& s,
                const std::vector<std::uint32_t>& state) {
    std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> out;
    std::map<std::uint32_t, std::uint32_t> va;
    for (std::size_t k = 0; k < s.vars.size(); ++k)
        va[s.vars[k]] = state[k];
    for (std::uint32_t j = 0; j < s.transitions.size(); ++j) {
        const transition& tau = s.transitions[j];
        // Parameters range over the whole domain.
        std::vector<std::size_t> idx(tau.params.size(), 0);
        for (;;) {
            for (std::size_t k = 0; k < tau.params.size(); ++k)
                va[tau.params[k]] = i.domain[idx[k]];
            bool guard_ok = true;
            for (const auto& l : tau.guard.literals())
                guard_ok = guard_ok && i.eval(l, va);
            if (guard_ok) {
                std::vector<std::uint32_t> next(s.vars.size());
                for (std::size_t k = 0; k < s.vars.size(); ++k)
                    next[k] = eval_update_term(i, tau.updates[k], va);
                if (std::find(out.begin(), out.end(), std::make_pair(j, next)) == out.end())
                    out.emplace_back(j, next);
            }
            std::size_t k = 0;
            for (; k < tau.params.size(); ++k) {
                if (++idx[k] < i.domain.size())
                    break;
                idx[k] = 0;
            }
            if (k == tau.params.size())
                break;
        }
        for (auto p : tau.params)
            va.erase(p);
    }
    return out;
}

std::vector<finite_interpretation> sample_models(const universal_theory& t,
                                                 const std::vector<std::uint32_t>& constants,
                                                 std::uint32_t size_bound, std::uint32_t count,
                                                 std::uint64_t seed) {
    signature s = t.sig();
    for (auto c : constants)
        s.individuals.insert(c);
    std::vector<std::uint32_t> inds(s.individuals.begin(), s.individuals.end());
    std::vector<std::uint32_t> concepts(s.concepts.begin(), s.concepts.end());
    std::vector<std::uint32_t> roles(s.roles.begin(), s.roles.end());
    if (size_bound < 1)
        size_bound = 1;
    if (concepts.size() > 16)
        throw resource_error("sample_models: too many concepts");

    auto concept_pos = [&](std::uint32_t id) {
        return static_cast<std::size_t>(
            std::lower_bound(concepts.begin(), concepts.end(), id) - concepts.begin());
    };

    // Unary types consistent with the concept-subsumption clauses.
    std::vector<std::uint32_t> valid_types;
    for (std::uint32_t mask = 0; mask < (1u << concepts.size()); ++mask) {
        bool ok = true;
        for (const auto& c : t.clauses) {
            if (c.s != universal_clause::shape::concept_subsumption)
                continue;
            bool prem = true;
            for (auto a : c.lhs_concepts)
                prem = prem && (mask >> concept_pos(a) & 1);
            if (!prem)
                continue;
            bool rhs = mask >> concept_pos(c.rhs_concept) & 1;
            if (rhs != !c.rhs_negated) {
                ok = false;
                break;
            }
        }
        if (ok)
            valid_types.push_back(mask);
    }
    if (valid_types.empty())
        return {};

    // An edge (d,e) of role P is admissible for types (td,te) when every
    // binary clause instance over it holds after closing under the role
    // subsumptions; disjointness is handled by closing one edge at a time.
    auto edge_consequences = [&](std::uint32_t role, bool forward) {
        // Roles implied for an edge: (role id, same orientation?). A clause
        // R1 -> R2 maps orientation fwd to fwd ^ inv(R1) ^ inv(R2).
        std::vector<std::pair<std::uint32_t, bool>> closed{{role, forward}};
        bool grown = true;
        while (grown) {
            grown = false;
            for (const auto& c : t.clauses) {
                if (c.s != universal_clause::shape::role_subsumption)
                    continue;
                for (auto [rid, fwd] : closed) {
                    if (c.r1.role != rid)
                        continue;
                    bool r2dir = fwd ^ c.r1.inverse ^ c.r2.inverse;
                    std::pair<std::uint32_t, bool> want{c.r2.role, r2dir};
                    if (std::find(closed.begin(), closed.end(), want) == closed.end()) {
                        closed.push_back(want);
                        grown = true;
                    }
                }
            }
        }
        return closed;
    };

    rng r(seed);
    std::vector<finite_interpretation> out;
    std::uint32_t attempts = 0;
    const std::uint32_t max_attempts = count * 20 + 50;
    while (out.size() < count && attempts < max_attempts) {
        ++attempts;
        finite_interpretation i;
        std::uint32_t base = std::max<std::uint32_t>(static_cast<std::uint32_t>(inds.size()), 1);
        std::uint32_t n = std::max<std::uint32_t>(1, 1 + r.below(size_bound));
        for (std::uint32_t e = 0; e < n; ++e)
            i.add_element(e);

        // Constants may co-denote; squeezing them into a prefix leaves
        // anonymous elements free to take arbitrary types. Retry the map a
        // few times when the induced type constraints clash.
        std::vector<std::uint32_t> required(n, 0), forbidden(n, 0);
        std::map<std::uint32_t, std::set<std::pair<std::uint32_t, std::uint32_t>>> role_req,
            role_forb;
        bool ok = false;
        for (std::uint32_t map_try = 0; map_try < 16 && !ok; ++map_try) {
            i.constant_map.clear();
            bool injective = n >= base && r.chance_percent(30);
            std::uint32_t slots = injective ? n : 1 + r.below(n);
            for (std::size_t k = 0; k < inds.size(); ++k)
                i.constant_map[inds[k]] =
                    injective ? static_cast<std::uint32_t>(k) : r.below(slots);

            std::fill(required.begin(), required.end(), 0);
            std::fill(forbidden.begin(), forbidden.end(), 0);
            role_req.clear();
            role_forb.clear();
            ok = true;
            for (const auto& l : t.ground) {
                const atom& a = l.at;
                if (a.kind == atom_kind::equality) {
                    std::uint32_t e1 = i.constant_map.at(a.lhs.id);
                    std::uint32_t e2 = i.constant_map.at(a.rhs.id);
                    if ((e1 == e2) != l.positive)
                        ok = false;
                    continue;
                }
                std::uint32_t e1 = i.constant_map.at(a.lhs.id);
                if (a.kind == atom_kind::concept_app) {
                    (l.positive ? required : forbidden)[e1] |= 1u << concept_pos(a.pred);
                } else {
                    std::uint32_t e2 = i.constant_map.at(a.rhs.id);
                    (l.positive ? role_req : role_forb)[a.pred].insert({e1, e2});
                }
            }
            for (std::uint32_t e = 0; e < n && ok; ++e) {
                bool any = false;
                for (auto m : valid_types)
                    any = any || ((m & required[e]) == required[e] && (m & forbidden[e]) == 0);
                ok = ok && any;
            }
        }
        if (!ok)
            continue;

        // Pick a type per element among those matching its constraints.
        std::vector<std::uint32_t> type(n, 0);
        for (std::uint32_t e = 0; e < n; ++e) {
            std::vector<std::uint32_t> options;
            for (auto m : valid_types)
                if ((m & required[e]) == required[e] && (m & forbidden[e]) == 0)
                    options.push_back(m);
            type[e] = options[r.below(static_cast<std::uint32_t>(options.size()))];
        }
        for (std::uint32_t e = 0; e < n; ++e)
            for (std::size_t cp = 0; cp < concepts.size(); ++cp)
                if (type[e] >> cp & 1)
                    i.add_concept(concepts[cp], e);

        // Candidate edges: required ones, plus sparse random ones; each edge
        // is closed under role subsumption and admitted only if all binary
        // clauses tolerate it against the chosen types.
        auto try_add_edge = [&](std::uint32_t role, std::uint32_t d, std::uint32_t e) {
            auto closed = edge_consequences(role, true);
            // Collect the concrete pairs the closure would add.
            std::vector<std::pair<std::uint32_t, std::pair<std::uint32_t, std::uint32_t>>> adds;
            for (auto [rid, fwd] : closed)
                adds.push_back({rid, fwd ? std::make_pair(d, e) : std::make_pair(e, d)});
            for (auto& [rid, pr] : adds) {
                if (role_forb.count(rid) && role_forb[rid].count(pr))
                    return false;
                // Domain/range constraints of shapes (2) and (3).
                for (const auto& c : t.clauses) {
                    if (c.s != universal_clause::shape::role_domain &&
                        c.s != universal_clause::shape::qualified_role_domain)
                        continue;
                    if (c.r1.role != rid)
                        continue;
                    std::uint32_t x = c.r1.inverse ? pr.second : pr.first;
                    std::uint32_t y = c.r1.inverse ? pr.first : pr.second;
                    if (c.s == universal_clause::shape::qualified_role_domain &&
                        !(type[y] >> concept_pos(c.qualifier) & 1))
                        continue;
                    bool rhs = type[x] >> concept_pos(c.rhs_concept) & 1;
                    if (rhs != !c.rhs_negated)
                        return false;
                }
                // Disjointness against already-present edges.
                for (const auto& c : t.clauses) {
                    if (c.s != universal_clause::shape::role_disjointness)
                        continue;
                    auto occ = [&](role_expr re, std::pair<std::uint32_t, std::uint32_t> p) {
                        return re.inverse ? std::make_pair(p.second, p.first) : p;
                    };
                    if (c.r1.role == rid) {
                        auto need_absent = occ(c.r2, occ(c.r1, pr));
                        if (i.in_role(c.r2.role, need_absent.first, need_absent.second))
                            return false;
                    }
                    if (c.r2.role == rid) {
                        auto need_absent = occ(c.r1, occ(c.r2, pr));
                        if (i.in_role(c.r1.role, need_absent.first, need_absent.second))
                            return false;
                    }
                }
            }
            for (auto& [rid, pr] : adds)
                i.add_role(rid, pr.first, pr.second);
            return true;
        };

        for (auto& [rid, pairs] : role_req)
            for (auto [d, e] : pairs)
                if (!try_add_edge(rid, d, e))
                    ok = false;
        if (!ok)
            continue;
        // Vary the edge density across samples.
        const std::uint32_t densities[3] = {8, 25, 55};
        std::uint32_t density = densities[r.below(3)];
        for (auto rl : roles)
            for (std::uint32_t d = 0; d < n; ++d)
                for (std::uint32_t e = 0; e < n; ++e)
                    if (r.chance_percent(density))
                        try_add_edge(rl, d, e); // silently skipped when inadmissible

        if (!check_model(i, t))
            continue;
        out.push_back(std::move(i));
    }
    return out;
}

forward_result bounded_forward_verify(const artifact_system& s, const universal_theory& t,
                                      const qff& nu, std::uint32_t domain_bound,
                                      std::uint32_t depth, const forward_options& opts) {
    forward_result result;
    std::vector<std::uint32_t> constants = s.scope_individuals();

    std::vector<finite_interpretation> models;
    for (const auto& m : opts.seed_models)
        if (check_model(m, t))
            models.push_back(m);
    auto sampled = sample_models(t, constants, domain_bound, opts.model_samples, opts.seed);
    for (auto& m : sampled)
        models.push_back(std::move(m));

    std::uint64_t states_used = 0;
    for (const auto& model : models) {
        ++result.models_explored;
        bool skip = false;
        for (auto [var_id, ind_id] : s.init) {
            (void)var_id;
            if (model.constant_map.find(ind_id) == model.constant_map.end())
                skip = true;
        }
        if (skip)
            continue;

        std::map<std::uint32_t, std::uint32_t> init_value; // var id -> individual id
        for (auto [var_id, ind_id] : s.init)
            init_value[var_id] = ind_id;
        std::vector<std::uint32_t> init_state;
        init_state.reserve(s.vars.size());
        for (auto var_id : s.vars)
            init_state.push_back(model.constant_map.at(init_value.at(var_id)));

        struct node {
            std::vector<std::uint32_t> state;
            std::int64_t parent;
            std::uint32_t via;
            std::uint32_t depth;
        };
        std::vector<node> nodes;
        std::set<std::vector<std::uint32_t>> seen;
        std::deque<std::size_t> queue;
        nodes.push_back({init_state, -1, 0, 0});
        seen.insert(init_state);
        queue.push_back(0);

        auto nu_holds = [&](const std::vector<std::uint32_t>& st) {
            std::map<std::uint32_t, std::uint32_t> va;
            for (std::size_t k = 0; k < s.vars.size(); ++k)
                va[s.vars[k]] = st[k];
            return model.eval(nu, va);
        };

        while (!queue.empty()) {
            std::size_t cur = queue.front();
            queue.pop_front();
            if (++states_used > opts.state_budget)
                throw resource_error("bounded forward search: state budget exceeded");
            if (nu_holds(nodes[cur].state)) {
                forward_violation v;
                v.model = model;
                std::vector<std::size_t> path;
                for (std::int64_t at = static_cast<std::int64_t>(cur); at >= 0;
                     at = nodes[static_cast<std::size_t>(at)].parent)
                    path.push_back(static_cast<std::size_t>(at));
                std::reverse(path.begin(), path.end());
                for (std::size_t k = 0; k < path.size(); ++k) {
                    v.states.push_back(nodes[path[k]].state);
                    if (k > 0)
                        v.transitions.push_back(nodes[path[k]].via);
                }
                result.violation = std::move(v);
                return result;
            }
            if (nodes[cur].depth >= depth)
                continue;
            for (const auto& [j, next] : step_successors(model, s, nodes[cur].state)) {
                if (seen.insert(next).second) {
                    nodes.push_back({next, static_cast<std::int64_t>(cur), j,
                                     nodes[cur].depth + 1});
                    queue.push_back(nodes.size() - 1);
                }
            }
        }
    }
    return result;
}

} // namespace oreach
