#include "oreach/cover.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace oreach {

namespace {

// Pseudo-variable ids for fresh witness elements; never escape this module.
constexpr std::uint32_t fresh_base = 0xf0000000u;

struct pattern {
    // For each dropped variable (in sorted order): index < kept_terms.size()
    // means "equals that term", otherwise kept_terms.size() + c for fresh
    // class c (classes opened in order of first use).
    std::vector<std::size_t> choice;
    std::size_t fresh_classes = 0;
};

void enumerate_patterns(std::size_t n_dropped, std::size_t n_kept_terms, std::size_t max_patterns,
                        std::vector<pattern>& out) {
    pattern cur;
    cur.choice.resize(n_dropped);
    auto rec = [&](auto&& self, std::size_t i, std::size_t classes) -> void {
        if (i == n_dropped) {
            pattern p = cur;
            p.fresh_classes = classes;
            out.push_back(std::move(p));
            if (out.size() > max_patterns)
                throw resource_error("cover: collision pattern budget exceeded");
            return;
        }
        for (std::size_t k = 0; k < n_kept_terms; ++k) {
            cur.choice[i] = k;
            self(self, i + 1, classes);
        }
        for (std::size_t c = 0; c <= classes; ++c) { // c == classes opens a new one
            cur.choice[i] = n_kept_terms + c;
            self(self, i + 1, std::max(classes, c + 1));
        }
    };
    rec(rec, 0, 0);
}

// Propositional clauses as sorted literal vectors.
using pclause = std::vector<sat::lit>;

bool tautological(const pclause& c) {
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
        if (c[i + 1] == sat::neg(c[i]))
            return true;
    return false;
}

bool subsumes(const pclause& a, const pclause& b) { // a subset of b
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Resolution-based elimination of `target` variables from `clauses`,
// interleaved with unit propagation. Derived unit literals over non-target
// variables are collected in `fixed_units`. Computes the exact projection of
// the clause set onto the non-target variables.
struct projector {
    std::size_t max_clauses;
    std::vector<pclause> clauses;
    std::vector<sat::lit> fixed_units; // non-target units
    const std::vector<bool>* is_target = nullptr;

    bool unit_propagate() {
        std::map<std::uint32_t, bool> assigned;
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<pclause> next;
            for (auto& c : clauses) {
                pclause simplified;
                bool satisfied = false;
                for (auto l : c) {
                    auto it = assigned.find(sat::var_of(l));
                    if (it == assigned.end()) {
                        simplified.push_back(l);
                    } else if (it->second == sat::sign_of(l)) {
                        satisfied = true;
                        break;
                    }
                }
                if (satisfied)
                    continue;
                if (simplified.empty())
                    return false; // contradiction
                if (simplified.size() == 1) {
                    std::uint32_t v = sat::var_of(simplified[0]);
                    auto it = assigned.find(v);
                    if (it != assigned.end()) {
                        if (it->second != sat::sign_of(simplified[0]))
                            return false;
                    } else {
                        assigned.emplace(v, sat::sign_of(simplified[0]));
                        changed = true;
                    }
                    continue;
                }
                next.push_back(std::move(simplified));
            }
            clauses = std::move(next);
        }
        for (auto [v, positive] : assigned)
            if (!(*is_target)[v])
                fixed_units.push_back(sat::mk_lit(v, positive));
        return true;
    }

    void add_with_subsumption(std::vector<pclause>& set, pclause c) {
        for (const auto& e : set)
            if (subsumes(e, c))
                return;
        std::erase_if(set, [&](const pclause& e) { return subsumes(c, e); });
        set.push_back(std::move(c));
    }

    // Eliminates every target variable; afterwards all clauses are over
    // non-target variables.
    void run() {
        // Keep only clauses touching a target variable; pure non-target
        // clauses here are theory instances already entailed in context.
        std::vector<pclause> work;
        for (auto& c : clauses) {
            bool touches = false;
            for (auto l : c)
                touches = touches || (*is_target)[sat::var_of(l)];
            if (touches)
                work.push_back(std::move(c));
        }

        std::set<std::uint32_t> targets;
        for (const auto& c : work)
            for (auto l : c)
                if ((*is_target)[sat::var_of(l)])
                    targets.insert(sat::var_of(l));

        while (!targets.empty()) {
            // Cheapest variable first (smallest positive*negative product).
            std::uint32_t best = 0;
            std::size_t best_cost = SIZE_MAX;
            for (auto v : targets) {
                std::size_t pos = 0, neg = 0;
                for (const auto& c : work)
                    for (auto l : c)
                        if (sat::var_of(l) == v)
                            (sat::sign_of(l) ? pos : neg)++;
                std::size_t cost = pos * neg;
                if (cost < best_cost) {
                    best_cost = cost;
                    best = v;
                }
            }
            targets.erase(best);

            std::vector<pclause> pos, neg, rest;
            for (auto& c : work) {
                bool has_pos = false, has_neg = false;
                for (auto l : c) {
                    if (sat::var_of(l) == best)
                        (sat::sign_of(l) ? has_pos : has_neg) = true;
                }
                if (has_pos)
                    pos.push_back(std::move(c));
                else if (has_neg)
                    neg.push_back(std::move(c));
                else
                    rest.push_back(std::move(c));
            }
            for (const auto& p : pos)
                for (const auto& q : neg) {
                    pclause res;
                    for (auto l : p)
                        if (sat::var_of(l) != best)
                            res.push_back(l);
                    for (auto l : q)
                        if (sat::var_of(l) != best)
                            res.push_back(l);
                    std::sort(res.begin(), res.end());
                    res.erase(std::unique(res.begin(), res.end()), res.end());
                    if (tautological(res))
                        continue;
                    add_with_subsumption(rest, std::move(res));
                    if (rest.size() > max_clauses)
                        throw resource_error("cover: projection clause budget exceeded");
                }
            work = std::move(rest);
        }
        clauses = std::move(work);
    }
};

term term_of_element(const grounding_domain& d, std::uint32_t e) {
    const auto& el = d.elements[e];
    assert(el.from != grounding_domain::element::origin::padding);
    return el.from == grounding_domain::element::origin::individual ? term{false, el.id}
                                                                    : term{true, el.id};
}

literal decode(const atom_encoder& enc, sat::lit l) {
    auto ga = enc.describe(sat::var_of(l));
    const grounding_domain& d = enc.domain();
    atom a;
    switch (ga.kind) {
    case atom_kind::concept_app:
        a = atom::concept_app(symbol{symbol_kind::concept_name, ga.pred},
                              term_of_element(d, ga.e1));
        break;
    case atom_kind::role_app:
        a = atom::role_app(symbol{symbol_kind::role_name, ga.pred}, term_of_element(d, ga.e1),
                           term_of_element(d, ga.e2));
        break;
    case atom_kind::equality:
        a = atom::equality(term_of_element(d, ga.e1), term_of_element(d, ga.e2));
        break;
    }
    return literal{a, sat::sign_of(l)};
}

} // namespace

target_vocabulary target_vocabulary::make(const universal_theory& t, const constraint& delta,
                                          const std::set<std::uint32_t>& drop,
                                          const std::vector<std::uint32_t>& scope_constants) {
    target_vocabulary v;
    std::set<std::uint32_t> kept;
    for (auto var : delta.free_vars())
        if (!drop.count(var))
            kept.insert(var);
    v.kept_vars.assign(kept.begin(), kept.end());
    std::set<std::uint32_t> consts(scope_constants.begin(), scope_constants.end());
    signature st = t.sig();
    consts.insert(st.individuals.begin(), st.individuals.end());
    signature sd = sig_of(delta);
    consts.insert(sd.individuals.begin(), sd.individuals.end());
    v.constants.assign(consts.begin(), consts.end());
    return v;
}

cover_result eliminate(const universal_theory& t, const constraint& delta,
                       const std::set<std::uint32_t>& drop, const target_vocabulary& scope,
                       const cover_options& opts) {
    cover_result out;
    // Only variables actually occurring need elimination work.
    std::set<std::uint32_t> dropped;
    for (auto v : drop)
        if (delta.free_vars().count(v))
            dropped.insert(v);
    out.eliminated.assign(drop.begin(), drop.end());

    if (dropped.empty()) {
        if (!sat_qff(t, delta.to_qff()).satisfiable) {
            out.formula = qff::bottom();
            return out;
        }
        out.formula = delta.to_qff();
        return out;
    }

    // Kept terms in a fixed order: kept variables then constants.
    std::vector<term> kept_terms;
    for (auto v : scope.kept_vars)
        kept_terms.push_back(term{true, v});
    for (auto c : scope.constants)
        kept_terms.push_back(term{false, c});

    std::vector<std::uint32_t> dropped_sorted(dropped.begin(), dropped.end());
    std::vector<pattern> patterns;
    enumerate_patterns(dropped_sorted.size(), kept_terms.size(), opts.max_patterns, patterns);

    // Predicate counts over theory + constraint.
    std::uint32_t nc = 0, nr = 0;
    {
        signature s = t.sig();
        s.merge(sig_of(delta));
        for (auto id : s.concepts)
            nc = std::max(nc, id + 1);
        for (auto id : s.roles)
            nr = std::max(nr, id + 1);
    }

    // Grounding caches per fresh-class count: clause skeleton + encoder.
    struct grounded {
        atom_encoder enc;
        std::vector<pclause> skeleton; // theory + fresh-distinctness units
    };
    std::map<std::size_t, grounded> cache;
    auto grounding_for = [&](std::size_t fresh) -> grounded& {
        auto it = cache.find(fresh);
        if (it != cache.end())
            return it->second;
        grounding_domain d;
        for (const auto& kt : kept_terms)
            d.elements.push_back(
                {kt.is_variable ? grounding_domain::element::origin::variable
                                : grounding_domain::element::origin::individual,
                 kt.id});
        for (std::size_t c = 0; c < fresh; ++c)
            d.elements.push_back(
                {grounding_domain::element::origin::variable, fresh_base + static_cast<std::uint32_t>(c)});
        if (d.elements.empty())
            d.elements.push_back({grounding_domain::element::origin::padding, 0});
        atom_encoder enc(std::move(d), nc, nr);
        grounded g{enc, {}};
        emit_theory_clauses(t, g.enc, [&](std::vector<sat::lit> c) {
            std::sort(c.begin(), c.end());
            c.erase(std::unique(c.begin(), c.end()), c.end());
            if (!tautological(c))
                g.skeleton.push_back(std::move(c));
        });
        // Fresh witnesses are distinct from every kept term and each other.
        std::size_t base = kept_terms.size();
        for (std::size_t c = 0; c < fresh; ++c) {
            for (std::size_t k = 0; k < base + c; ++k)
                g.skeleton.push_back({sat::mk_lit(
                    g.enc.eq_var(static_cast<std::uint32_t>(k),
                                 static_cast<std::uint32_t>(base + c)),
                    false)});
        }
        return cache.emplace(fresh, std::move(g)).first->second;
    };

    struct branch_out {
        std::vector<literal> units;                 // conjunction part
        std::vector<std::vector<literal>> clauses;  // non-unit CNF part
    };
    std::vector<branch_out> branches;

    for (const auto& pat : patterns) {
        substitution sigma;
        for (std::size_t i = 0; i < dropped_sorted.size(); ++i) {
            if (pat.choice[i] < kept_terms.size())
                sigma[dropped_sorted[i]] = kept_terms[pat.choice[i]];
            else
                sigma[dropped_sorted[i]] =
                    term{true, fresh_base + static_cast<std::uint32_t>(pat.choice[i] -
                                                                      kept_terms.size())};
        }
        constraint branch_delta = substitute(delta, sigma);
        if (branch_delta.has_complementary_pair())
            continue;

        grounded& g = grounding_for(pat.fresh_classes);

        // Encode the substituted constraint as assumption units.
        std::vector<sat::lit> units;
        bool infeasible = false;
        for (const auto& l : branch_delta.literals()) {
            auto e = g.enc.encode(l);
            if (e.t == atom_encoder::encoded::tag::always_false) {
                infeasible = true;
                break;
            }
            if (e.t == atom_encoder::encoded::tag::prop)
                units.push_back(e.l);
        }
        if (infeasible)
            continue;
        std::sort(units.begin(), units.end());
        units.erase(std::unique(units.begin(), units.end()), units.end());
        bool clash = false;
        for (std::size_t i = 0; i + 1 < units.size(); ++i)
            clash = clash || units[i + 1] == sat::neg(units[i]);
        if (clash)
            continue;

        // Branch satisfiability against the shared grounding.
        {
            sat::solver s;
            s.set_conflict_budget(opts.sat_conflict_budget);
            for (std::uint32_t i = 0; i < g.enc.num_vars(); ++i)
                s.new_var();
            for (const auto& c : g.skeleton)
                s.add_clause(std::vector<sat::lit>(c));
            if (s.solve(units) != sat::status::satisfiable)
                continue;
        }

        if (pat.fresh_classes == 0) {
            // All literals already over the vocabulary.
            branch_out b;
            for (const auto& l : branch_delta.literals())
                if (!(l.at.kind == atom_kind::equality && l.at.lhs == l.at.rhs) &&
                    std::find(b.units.begin(), b.units.end(), l) == b.units.end())
                    b.units.push_back(l);
            branches.push_back(std::move(b));
            continue;
        }

        // Project the fresh atoms away by variable elimination.
        std::vector<bool> is_target(g.enc.num_vars(), false);
        auto fresh_elem = [&](std::uint32_t e) {
            const auto& el = g.enc.domain().elements[e];
            return el.from == grounding_domain::element::origin::variable &&
                   el.id >= fresh_base;
        };
        for (std::uint32_t v = 0; v < g.enc.num_vars(); ++v) {
            auto ga = g.enc.describe(v);
            if (ga.kind == atom_kind::concept_app)
                is_target[v] = fresh_elem(ga.e1);
            else
                is_target[v] = fresh_elem(ga.e1) || fresh_elem(ga.e2);
        }

        projector proj;
        proj.max_clauses = opts.max_dp_clauses;
        proj.is_target = &is_target;
        proj.clauses = g.skeleton;
        for (auto u : units)
            proj.clauses.push_back({u});
        bool consistent = proj.unit_propagate();
        assert(consistent); // solver already confirmed satisfiability
        if (!consistent)
            continue;
        proj.run();

        branch_out b;
        for (auto u : proj.fixed_units)
            b.units.push_back(decode(g.enc, u));
        for (const auto& c : proj.clauses) {
            std::vector<literal> lits;
            for (auto l : c)
                lits.push_back(decode(g.enc, l));
            b.clauses.push_back(std::move(lits));
        }
        branches.push_back(std::move(b));
    }

    if (branches.empty()) {
        out.formula = qff::bottom();
        return out;
    }

    if (opts.simplify) {
        // Redundancy removal, T-equivalence preserving throughout. All the
        // entailment checks run as assumption solves against one grounding of
        // T over the kept terms.
        grounded& g0 = grounding_for(0);
        sat::solver simp;
        simp.set_conflict_budget(opts.sat_conflict_budget);
        for (std::uint32_t i = 0; i < g0.enc.num_vars(); ++i)
            simp.new_var();
        for (const auto& c : g0.skeleton)
            simp.add_clause(std::vector<sat::lit>(c));

        auto as_lit = [&](const literal& l) { return g0.enc.encode(l); };
        auto entailed = [&](const std::vector<literal>& context, const literal& goal) {
            // T, context |= goal?
            std::vector<sat::lit> assume;
            for (const auto& l : context) {
                auto e = as_lit(l);
                if (e.t == atom_encoder::encoded::tag::prop)
                    assume.push_back(e.l);
            }
            auto eg = as_lit(goal);
            if (eg.t == atom_encoder::encoded::tag::always_true)
                return true;
            if (eg.t == atom_encoder::encoded::tag::always_false)
                return false;
            assume.push_back(sat::neg(eg.l));
            return simp.solve(assume) == sat::status::unsatisfiable;
        };

        for (auto& b : branches) {
            // A unit entailed by the remaining ones is dropped.
            bool changed = true;
            while (changed) {
                changed = false;
                for (std::size_t i = 0; i < b.units.size(); ++i) {
                    std::vector<literal> rest;
                    for (std::size_t j = 0; j < b.units.size(); ++j)
                        if (j != i)
                            rest.push_back(b.units[j]);
                    if (entailed(rest, b.units[i])) {
                        b.units = std::move(rest);
                        changed = true;
                        break;
                    }
                }
            }
            // A clause entailed by T plus the units is dropped.
            std::erase_if(b.clauses, [&](const std::vector<literal>& c) {
                std::vector<sat::lit> assume;
                for (const auto& l : b.units) {
                    auto e = as_lit(l);
                    if (e.t == atom_encoder::encoded::tag::prop)
                        assume.push_back(e.l);
                }
                for (const auto& l : c) {
                    auto e = as_lit(l.negated());
                    if (e.t == atom_encoder::encoded::tag::always_false)
                        return false; // clause contains t = t, trivially true
                    if (e.t == atom_encoder::encoded::tag::prop)
                        assume.push_back(e.l);
                }
                return simp.solve(assume) == sat::status::unsatisfiable;
            });
        }
    }

    std::vector<qff> branch_formulas;
    for (const auto& b : branches) {
        std::vector<qff> parts;
        for (const auto& l : b.units)
            parts.push_back(qff::of(l));
        for (const auto& c : b.clauses) {
            std::vector<qff> lits;
            for (const auto& l : c)
                lits.push_back(qff::of(l));
            parts.push_back(qff::any_of(std::move(lits)));
        }
        branch_formulas.push_back(qff::all_of(std::move(parts)));
    }

    if (opts.simplify) {
        // Absorb disjuncts T-entailed by the remaining ones.
        bool changed = true;
        while (changed && branch_formulas.size() > 1) {
            changed = false;
            for (std::size_t b = 0; b < branch_formulas.size(); ++b) {
                std::vector<qff> others;
                for (std::size_t j = 0; j < branch_formulas.size(); ++j)
                    if (j != b)
                        others.push_back(branch_formulas[j]);
                if (entails_qff(t, branch_formulas[b], qff::any_of(others))) {
                    branch_formulas.erase(branch_formulas.begin() +
                                          static_cast<std::ptrdiff_t>(b));
                    changed = true;
                    break;
                }
            }
        }
    }

    out.formula = qff::any_of(branch_formulas);
    assert([&] {
        for (auto v : free_vars(out.formula))
            if (!std::binary_search(scope.kept_vars.begin(), scope.kept_vars.end(), v))
                return false;
        return true;
    }());
    return out;
}

qff eliminate_qff(const universal_theory& t, const qff& f, const std::set<std::uint32_t>& drop,
                  const std::vector<std::uint32_t>& scope_constants, const cover_options& opts) {
    std::vector<qff> parts;
    for (const auto& cube : to_dnf(f)) {
        target_vocabulary scope = target_vocabulary::make(t, cube, drop, scope_constants);
        parts.push_back(eliminate(t, cube, drop, scope, opts).formula);
    }
    return qff::any_of(std::move(parts));
}

} // namespace oreach
