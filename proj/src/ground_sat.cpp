#include "oreach/ground_sat.hpp"

#include <algorithm>
#include <cassert>

namespace oreach {

std::optional<std::uint32_t> grounding_domain::index_of(const term& t) const {
    auto want = t.is_variable ? element::origin::variable : element::origin::individual;
    for (std::uint32_t i = 0; i < elements.size(); ++i)
        if (elements[i].from == want && elements[i].id == t.id)
            return i;
    return std::nullopt;
}

grounding_domain build_domain(const universal_theory& t, std::span<const qff* const> formulas,
                              std::span<const std::uint32_t> extra_individuals,
                              std::span<const std::uint32_t> extra_variables) {
    std::set<std::uint32_t> inds = t.sig().individuals;
    std::set<std::uint32_t> vars;
    for (const qff* f : formulas) {
        signature s = sig_of(*f);
        inds.insert(s.individuals.begin(), s.individuals.end());
        for (auto v : free_vars(*f))
            vars.insert(v);
    }
    inds.insert(extra_individuals.begin(), extra_individuals.end());
    vars.insert(extra_variables.begin(), extra_variables.end());

    grounding_domain d;
    for (auto i : inds)
        d.elements.push_back({grounding_domain::element::origin::individual, i});
    for (auto v : vars)
        d.elements.push_back({grounding_domain::element::origin::variable, v});
    if (d.elements.empty())
        d.elements.push_back({grounding_domain::element::origin::padding, 0});
    return d;
}

atom_encoder::atom_encoder(grounding_domain d, std::uint32_t n_concepts, std::uint32_t n_roles)
    : dom_(std::move(d)), n_concepts_(n_concepts), n_roles_(n_roles) {
    std::uint32_t n = static_cast<std::uint32_t>(dom_.size());
    unary_base_ = 0;
    binary_base_ = n_concepts_ * n;
    eq_base_ = binary_base_ + n_roles_ * n * n;
}

std::uint32_t atom_encoder::num_vars() const {
    std::uint32_t n = static_cast<std::uint32_t>(dom_.size());
    return eq_base_ + n * (n - 1) / 2;
}

std::uint32_t atom_encoder::unary_var(std::uint32_t concept_id, std::uint32_t e) const {
    assert(concept_id < n_concepts_ && e < dom_.size());
    return unary_base_ + concept_id * static_cast<std::uint32_t>(dom_.size()) + e;
}

std::uint32_t atom_encoder::binary_var(std::uint32_t role_id, std::uint32_t e1,
                                       std::uint32_t e2) const {
    std::uint32_t n = static_cast<std::uint32_t>(dom_.size());
    assert(role_id < n_roles_ && e1 < n && e2 < n);
    return binary_base_ + role_id * n * n + e1 * n + e2;
}

std::uint32_t atom_encoder::eq_var(std::uint32_t e1, std::uint32_t e2) const {
    if (e2 < e1)
        std::swap(e1, e2);
    std::uint32_t n = static_cast<std::uint32_t>(dom_.size());
    assert(e1 < e2 && e2 < n);
    // Triangular index over pairs e1 < e2.
    return eq_base_ + e1 * n - e1 * (e1 + 1) / 2 + (e2 - e1 - 1);
}

atom_encoder::encoded atom_encoder::encode(const literal& l) const {
    auto idx = [&](const term& t) {
        auto i = dom_.index_of(t);
        if (!i)
            throw vocab_error("term not in grounding domain");
        return *i;
    };
    const atom& a = l.at;
    switch (a.kind) {
    case atom_kind::concept_app:
        return encoded{encoded::tag::prop, sat::mk_lit(unary_var(a.pred, idx(a.lhs)), l.positive)};
    case atom_kind::role_app:
        return encoded{encoded::tag::prop,
                       sat::mk_lit(binary_var(a.pred, idx(a.lhs), idx(a.rhs)), l.positive)};
    case atom_kind::equality: {
        std::uint32_t e1 = idx(a.lhs), e2 = idx(a.rhs);
        if (e1 == e2)
            return encoded{l.positive ? encoded::tag::always_true : encoded::tag::always_false, 0};
        return encoded{encoded::tag::prop, sat::mk_lit(eq_var(e1, e2), l.positive)};
    }
    }
    return encoded{};
}

atom_encoder::ground_atom atom_encoder::describe(std::uint32_t var) const {
    std::uint32_t n = static_cast<std::uint32_t>(dom_.size());
    if (var < binary_base_)
        return ground_atom{atom_kind::concept_app, var / n, var % n, 0};
    if (var < eq_base_) {
        std::uint32_t off = var - binary_base_;
        return ground_atom{atom_kind::role_app, off / (n * n), (off % (n * n)) / n, off % n};
    }
    std::uint32_t off = var - eq_base_;
    for (std::uint32_t e1 = 0; e1 < n; ++e1) {
        std::uint32_t row = (n - e1 - 1);
        if (off < row)
            return ground_atom{atom_kind::equality, 0, e1, e1 + 1 + off};
        off -= row;
    }
    throw vocab_error("bad encoding variable");
}

void emit_theory_clauses(const universal_theory& t, const atom_encoder& enc,
                         const std::function<void(std::vector<sat::lit>)>& emit) {
    std::uint32_t n = static_cast<std::uint32_t>(enc.domain().size());

    auto emit_clause = [&](const clause& c) {
        std::vector<sat::lit> lits;
        lits.reserve(c.size());
        for (const auto& l : c.literals()) {
            auto e = enc.encode(l);
            if (e.t == atom_encoder::encoded::tag::always_true)
                return; // clause satisfied
            if (e.t == atom_encoder::encoded::tag::always_false)
                continue;
            lits.push_back(e.l);
        }
        emit(std::move(lits));
    };

    auto elem_term = [&](std::uint32_t e) {
        const auto& el = enc.domain().elements[e];
        switch (el.from) {
        case grounding_domain::element::origin::individual: return term{false, el.id};
        case grounding_domain::element::origin::variable: return term{true, el.id};
        case grounding_domain::element::origin::padding: return term{true, 0xfffffffu};
        }
        return term{};
    };

    // All instantiations of the universal clauses. The padding element (when
    // present) is covered by instantiating over every domain index.
    for (const auto& uc : t.clauses) {
        if (uc.binary()) {
            for (std::uint32_t x = 0; x < n; ++x)
                for (std::uint32_t y = 0; y < n; ++y) {
                    // Instantiate over representative terms, then map back to
                    // indices (the padding pseudo-term is not in the domain).
                    clause inst = uc.instantiate(elem_term(x), elem_term(y));
                    std::vector<sat::lit> lits;
                    for (const auto& l : inst.literals()) {
                        const atom& a = l.at;
                        assert(a.kind != atom_kind::equality);
                        if (a.kind == atom_kind::concept_app) {
                            std::uint32_t e = (a.lhs == elem_term(x)) ? x : y;
                            lits.push_back(sat::mk_lit(enc.unary_var(a.pred, e), l.positive));
                        } else {
                            std::uint32_t e1 = (a.lhs == elem_term(x)) ? x : y;
                            std::uint32_t e2 = (a.rhs == elem_term(x)) ? x : y;
                            lits.push_back(sat::mk_lit(enc.binary_var(a.pred, e1, e2), l.positive));
                        }
                    }
                    emit(std::move(lits));
                }
        } else {
            for (std::uint32_t x = 0; x < n; ++x) {
                clause inst = uc.instantiate(elem_term(x), elem_term(x));
                std::vector<sat::lit> lits;
                for (const auto& l : inst.literals())
                    lits.push_back(sat::mk_lit(enc.unary_var(l.at.pred, x), l.positive));
                emit(std::move(lits));
            }
        }
    }

    // Ground literals of the theory (the translated ABox).
    for (const auto& l : t.ground)
        emit_clause(clause{{l}});

    // Equality congruence. eq(e,e) is constant-true and eq variables are
    // shared per unordered pair, so reflexivity and symmetry need no clauses.
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = a + 1; b < n; ++b)
            for (std::uint32_t c = b + 1; c < n; ++c) {
                sat::lit ab = sat::mk_lit(enc.eq_var(a, b), true);
                sat::lit bc = sat::mk_lit(enc.eq_var(b, c), true);
                sat::lit ac = sat::mk_lit(enc.eq_var(a, c), true);
                emit({sat::neg(ab), sat::neg(bc), ac});
                emit({sat::neg(ab), sat::neg(ac), bc});
                emit({sat::neg(ac), sat::neg(bc), ab});
            }
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b) {
            if (a == b)
                continue;
            sat::lit eq = sat::mk_lit(enc.eq_var(a, b), true);
            for (std::uint32_t c = 0; c < enc.n_concepts(); ++c)
                emit({sat::neg(eq), sat::mk_lit(enc.unary_var(c, a), false),
                      sat::mk_lit(enc.unary_var(c, b), true)});
            for (std::uint32_t r = 0; r < enc.n_roles(); ++r)
                for (std::uint32_t d = 0; d < n; ++d) {
                    emit({sat::neg(eq), sat::mk_lit(enc.binary_var(r, a, d), false),
                          sat::mk_lit(enc.binary_var(r, b, d), true)});
                    emit({sat::neg(eq), sat::mk_lit(enc.binary_var(r, d, a), false),
                          sat::mk_lit(enc.binary_var(r, d, b), true)});
                }
        }
}

namespace {

// Tseitin encoding; returns the literal standing for f.
sat::lit tseitin(sat::solver& s, const atom_encoder& enc, const qff& f,
                 std::optional<sat::lit>& const_true) {
    auto constant = [&](bool value) {
        if (!const_true) {
            std::uint32_t v = s.new_var();
            s.add_clause({sat::mk_lit(v, true)});
            const_true = sat::mk_lit(v, true);
        }
        return value ? *const_true : sat::neg(*const_true);
    };
    switch (f.kind()) {
    case qff::node_kind::top:
        return constant(true);
    case qff::node_kind::bottom:
        return constant(false);
    case qff::node_kind::atom_node: {
        auto e = enc.encode(literal{f.atom_of(), true});
        if (e.t == atom_encoder::encoded::tag::always_true)
            return constant(true);
        if (e.t == atom_encoder::encoded::tag::always_false)
            return constant(false);
        return e.l;
    }
    case qff::node_kind::negation:
        return sat::neg(tseitin(s, enc, f.children()[0], const_true));
    case qff::node_kind::conjunction:
    case qff::node_kind::disjunction: {
        std::vector<sat::lit> kids;
        kids.reserve(f.children().size());
        for (const auto& k : f.children())
            kids.push_back(tseitin(s, enc, k, const_true));
        sat::lit out = sat::mk_lit(s.new_var(), true);
        bool conj = f.kind() == qff::node_kind::conjunction;
        std::vector<sat::lit> big;
        big.reserve(kids.size() + 1);
        big.push_back(conj ? out : sat::neg(out));
        for (sat::lit k : kids) {
            if (conj) {
                s.add_clause({sat::neg(out), k});
                big.push_back(sat::neg(k));
            } else {
                s.add_clause({out, sat::neg(k)});
                big.push_back(k);
            }
        }
        s.add_clause(std::move(big));
        return out;
    }
    }
    return 0;
}

} // namespace

void add_qff_clauses(sat::solver& s, const atom_encoder& enc, const qff& f,
                     std::optional<sat::lit> guard) {
    std::optional<sat::lit> const_true;
    sat::lit root = tseitin(s, enc, f, const_true);
    if (guard)
        s.add_clause({sat::neg(*guard), root});
    else
        s.add_clause({root});
}

lifted_model lift_witness(const atom_encoder& enc, const sat_verdict& v) {
    assert(v.satisfiable);
    std::uint32_t n = static_cast<std::uint32_t>(enc.domain().size());

    // Union-find over domain elements from the equality atoms.
    std::vector<std::uint32_t> parent(n);
    for (std::uint32_t i = 0; i < n; ++i)
        parent[i] = i;
    std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [ga, val] : v.witness)
        if (ga.kind == atom_kind::equality && val) {
            std::uint32_t a = find(ga.e1), b = find(ga.e2);
            if (a != b)
                parent[std::max(a, b)] = std::min(a, b);
        }

    lifted_model out;
    out.element_class.resize(n);
    std::map<std::uint32_t, std::uint32_t> rep_to_class;
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint32_t r = find(i);
        auto it = rep_to_class.find(r);
        if (it == rep_to_class.end()) {
            std::uint32_t cls = static_cast<std::uint32_t>(rep_to_class.size());
            rep_to_class.emplace(r, cls);
            out.element_class[i] = cls;
            out.interp.add_element(cls);
        } else {
            out.element_class[i] = it->second;
        }
    }
    for (const auto& [ga, val] : v.witness) {
        if (!val)
            continue;
        if (ga.kind == atom_kind::concept_app)
            out.interp.add_concept(ga.pred, out.element_class[ga.e1]);
        else if (ga.kind == atom_kind::role_app)
            out.interp.add_role(ga.pred, out.element_class[ga.e1], out.element_class[ga.e2]);
    }
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto& el = enc.domain().elements[i];
        if (el.from == grounding_domain::element::origin::individual)
            out.interp.constant_map[el.id] = out.element_class[i];
    }
    return out;
}

namespace {

std::uint32_t max_pred_count(const universal_theory& t, const qff& f, symbol_kind kind) {
    std::uint32_t m = 0;
    signature st = t.sig();
    signature sf = sig_of(f);
    const auto& set1 = kind == symbol_kind::concept_name ? st.concepts : st.roles;
    const auto& set2 = kind == symbol_kind::concept_name ? sf.concepts : sf.roles;
    for (auto id : set1)
        m = std::max(m, id + 1);
    for (auto id : set2)
        m = std::max(m, id + 1);
    return m;
}

} // namespace

std::pair<qff, substitution> inline_equalities(const qff& f) {
    // Collect top-level conjunct literals.
    std::vector<literal> top;
    if (f.kind() == qff::node_kind::atom_node)
        top.push_back(literal{f.atom_of(), true});
    else if (f.kind() == qff::node_kind::negation &&
             f.children()[0].kind() == qff::node_kind::atom_node)
        top.push_back(literal{f.children()[0].atom_of(), false});
    else if (f.kind() == qff::node_kind::conjunction) {
        for (const auto& k : f.children()) {
            if (k.kind() == qff::node_kind::atom_node)
                top.push_back(literal{k.atom_of(), true});
            else if (k.kind() == qff::node_kind::negation &&
                     k.children()[0].kind() == qff::node_kind::atom_node)
                top.push_back(literal{k.children()[0].atom_of(), false});
        }
    }

    substitution sigma;
    auto resolve = [&](term t) {
        while (t.is_variable) {
            auto it = sigma.find(t.id);
            if (it == sigma.end())
                break;
            t = it->second;
        }
        return t;
    };
    for (const auto& l : top) {
        if (!l.positive || l.at.kind != atom_kind::equality)
            continue;
        term a = resolve(l.at.lhs), b = resolve(l.at.rhs);
        if (a == b)
            continue;
        if (a.is_variable)
            sigma[a.id] = b;
        else if (b.is_variable)
            sigma[b.id] = a;
        // constant = constant stays for the solver
    }
    if (sigma.empty())
        return {f, sigma};
    // Flatten chains so each binding maps directly to its final term.
    for (auto& [v, t] : sigma)
        t = resolve(t);
    return {substitute(f, sigma), sigma};
}

sat_verdict sat_qff(const universal_theory& t, const qff& f, const sat_options& opts) {
    auto [g, sigma] = inline_equalities(f);

    const qff* fs[] = {&g};
    grounding_domain dom = build_domain(t, fs, opts.extra_individuals, opts.extra_variables);
    atom_encoder enc(std::move(dom), max_pred_count(t, g, symbol_kind::concept_name),
                     max_pred_count(t, g, symbol_kind::role_name));

    sat::solver s;
    s.set_conflict_budget(opts.conflict_budget);
    for (std::uint32_t i = 0; i < enc.num_vars(); ++i)
        s.new_var();
    emit_theory_clauses(t, enc, [&](std::vector<sat::lit> c) { s.add_clause(std::move(c)); });
    add_qff_clauses(s, enc, g);

    sat_verdict v;
    if (s.solve() == sat::status::satisfiable) {
        v.satisfiable = true;
        if (opts.want_witness) {
            v.witness.reserve(enc.num_vars());
            for (std::uint32_t var = 0; var < enc.num_vars(); ++var)
                v.witness.emplace_back(enc.describe(var), s.model_value(var));
        }
    }
    return v;
}

std::optional<solved_model> solve_model(const universal_theory& t, const qff& f,
                                        const sat_options& opts) {
    auto [g, sigma] = inline_equalities(f);

    const qff* fs[] = {&g};
    grounding_domain dom = build_domain(t, fs, opts.extra_individuals, opts.extra_variables);
    // Variables of the original formula eliminated by equality inlining still
    // need a denotation; chase each binding to a term of the reduced formula.
    atom_encoder enc(std::move(dom), max_pred_count(t, g, symbol_kind::concept_name),
                     max_pred_count(t, g, symbol_kind::role_name));

    sat::solver s;
    s.set_conflict_budget(opts.conflict_budget);
    for (std::uint32_t i = 0; i < enc.num_vars(); ++i)
        s.new_var();
    emit_theory_clauses(t, enc, [&](std::vector<sat::lit> c) { s.add_clause(std::move(c)); });
    add_qff_clauses(s, enc, g);
    if (s.solve() != sat::status::satisfiable)
        return std::nullopt;

    sat_verdict v;
    v.satisfiable = true;
    v.witness.reserve(enc.num_vars());
    for (std::uint32_t var = 0; var < enc.num_vars(); ++var)
        v.witness.emplace_back(enc.describe(var), s.model_value(var));
    lifted_model lifted = lift_witness(enc, v);

    solved_model out;
    out.interp = std::move(lifted.interp);
    for (std::uint32_t i = 0; i < enc.domain().size(); ++i) {
        const auto& el = enc.domain().elements[i];
        if (el.from == grounding_domain::element::origin::variable)
            out.var_class[el.id] = lifted.element_class[i];
    }
    auto resolve = [&](term tm) {
        while (tm.is_variable) {
            auto it = sigma.find(tm.id);
            if (it == sigma.end())
                break;
            tm = it->second;
        }
        return tm;
    };
    for (const auto& [var_id, bound_to] : sigma) {
        term tm = resolve(bound_to);
        auto idx = enc.domain().index_of(tm);
        if (idx)
            out.var_class[var_id] = lifted.element_class[*idx];
    }
    return out;
}

bool entails(const universal_theory& t, const constraint& delta, const clause& chi) {
    qff query = qff::all_of({delta.to_qff(), qff::neg(chi.to_qff())});
    return !sat_qff(t, query).satisfiable;
}

bool entails_qff(const universal_theory& t, const qff& lhs, const qff& rhs) {
    return !sat_qff(t, qff::all_of({lhs, qff::neg(rhs)})).satisfiable;
}

sat_session::sat_session(const universal_theory& t, grounding_domain d, std::uint32_t n_concepts,
                         std::uint32_t n_roles)
    : enc_(std::move(d), n_concepts, n_roles) {
    for (std::uint32_t i = 0; i < enc_.num_vars(); ++i)
        solver_.new_var();
    emit_theory_clauses(t, enc_, [&](std::vector<sat::lit> c) { solver_.add_clause(std::move(c)); });
}

bool sat_session::query(const qff& f) {
    sat::lit guard = sat::mk_lit(solver_.new_var(), true);
    add_qff_clauses(solver_, enc_, f, guard);
    last_sat_ = solver_.solve({guard}) == sat::status::satisfiable;
    return last_sat_;
}

sat_verdict sat_session::last_verdict() const {
    sat_verdict v;
    v.satisfiable = last_sat_;
    if (last_sat_) {
        for (std::uint32_t var = 0; var < enc_.num_vars(); ++var)
            v.witness.emplace_back(enc_.describe(var), solver_.model_value(var));
    }
    return v;
}

} // namespace oreach
