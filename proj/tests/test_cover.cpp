#include <doctest.h>

#include "test_support.hpp"

#include "oreach/cover.hpp"
#include "oreach/parser.hpp"

using namespace oreach;
namespace ts = testsupport;

namespace {

bool t_equivalent(const universal_theory& t, const qff& a, const qff& b) {
    return entails_qff(t, a, b) && entails_qff(t, b, a);
}

} // namespace

TEST_CASE("existential witnesses collapse onto the kept variable") {
    // T = {User <= not JobPosition}, delta = User(y) & x' = y, drop y.
    vocab v;
    symbol user = v.intern("User", symbol_kind::concept_name);
    symbol jobpos = v.intern("JobPosition", symbol_kind::concept_name);
    symbol xp = v.intern("xp", symbol_kind::variable);
    symbol y = v.intern("y", symbol_kind::variable);
    universal_clause c;
    c.s = universal_clause::shape::concept_subsumption;
    c.lhs_concepts = {user.id};
    c.rhs_concept = jobpos.id;
    c.rhs_negated = true;
    universal_theory t;
    t.clauses.push_back(c);

    constraint delta;
    delta.push(literal{atom::concept_app(user, term::var(y)), true});
    delta.push(literal{atom::equality(term::var(xp), term::var(y)), true});
    std::set<std::uint32_t> drop{y.id};
    target_vocabulary scope = target_vocabulary::make(t, delta, drop, {});
    cover_result res = eliminate(t, delta, drop, scope);

    qff expect = qff::all_of({qff::of(atom::concept_app(user, term::var(xp))),
                              qff::neg(qff::of(atom::concept_app(jobpos, term::var(xp))))});
    CHECK(t_equivalent(t, res.formula, expect));
    CHECK(free_vars(res.formula) == std::set<std::uint32_t>{xp.id});
}

TEST_CASE("eliminating a variable equated to a kept one yields true") {
    vocab v = ts::small_vocab(1, 0, 0, 2);
    term x{true, 0}, y{true, 1};
    constraint delta;
    delta.push(literal{atom::equality(x, y), true});
    std::set<std::uint32_t> drop{0};
    target_vocabulary scope = target_vocabulary::make(universal_theory{}, delta, drop, {});
    cover_result res = eliminate(universal_theory{}, delta, drop, scope);
    CHECK(res.formula.is_true());
}

TEST_CASE("an unsatisfiable constraint eliminates to false") {
    term x{true, 0};
    constraint delta;
    delta.push(literal{atom{atom_kind::concept_app, 0, x, {}}, true});
    delta.push(literal{atom{atom_kind::concept_app, 0, x, {}}, false});
    std::set<std::uint32_t> drop{0};
    target_vocabulary scope = target_vocabulary::make(universal_theory{}, delta, drop, {});
    CHECK(eliminate(universal_theory{}, delta, drop, scope).formula.is_false());
}

TEST_CASE("the hiring guard's cover entails User for the stored applicant") {
    ts::hiring_fixture f;
    // delta = guard of t1 & x_applicant' = y1, dropping y1.
    symbol xp = f.v.intern("xp_applicant", symbol_kind::variable);
    symbol y1 = *f.v.lookup("y1");
    constraint delta = f.sys.transitions[0].guard;
    delta.push(literal{atom::equality(term::var(xp), term::var(y1)), true});
    std::set<std::uint32_t> drop{y1.id};
    target_vocabulary scope =
        target_vocabulary::make(f.theory, delta, drop, f.sys.scope_individuals());
    cover_result res = eliminate(f.theory, delta, drop, scope);
    qff user_xp = qff::of(atom::concept_app(*f.v.lookup("User"), term::var(xp)));
    CHECK(entails_qff(f.theory, res.formula, user_xp));
    CHECK(entails_qff(f.theory, user_xp, res.formula)); // and nothing more
}

TEST_CASE("empty drop set returns the constraint itself") {
    ts::rng r(99);
    for (int round = 0; round < 40; ++round) {
        ts::small_instance inst = ts::random_instance(r);
        target_vocabulary scope = target_vocabulary::make(inst.theory, inst.delta, {}, {});
        cover_result res = eliminate(inst.theory, inst.delta, {}, scope);
        bool sat = sat_qff(inst.theory, inst.delta.to_qff()).satisfiable;
        if (!sat)
            CHECK(res.formula.is_false());
        else
            CHECK(t_equivalent(inst.theory, res.formula, inst.delta.to_qff()));
    }
}

TEST_CASE("elimination distributes over disjunction") {
    vocab v = ts::small_vocab(2, 0, 0, 2);
    term x{true, 0}, y{true, 1};
    qff d1 = qff::all_of({qff::of(atom{atom_kind::concept_app, 0, x, {}}),
                          qff::of(atom::equality(x, y))});
    qff d2 = qff::of(atom{atom_kind::concept_app, 1, y, {}});
    qff both = qff::any_of({d1, d2});
    std::set<std::uint32_t> drop{x.id};

    qff joint = eliminate_qff(universal_theory{}, both, drop, {});
    qff split = qff::any_of({eliminate_qff(universal_theory{}, d1, drop, {}),
                             eliminate_qff(universal_theory{}, d2, drop, {})});
    CHECK(t_equivalent(universal_theory{}, joint, split));
    CHECK(eliminate_qff(universal_theory{}, qff::bottom(), drop, {}).is_false());
}

TEST_CASE("covers are sound and strong on random instances") {
    ts::rng r(4242);
    int done = 0;
    for (int round = 0; round < 60 && done < 30; ++round) {
        ts::small_instance inst = ts::random_instance(r, 4, 4);
        // Keep at most one variable, drop the rest.
        std::set<std::uint32_t> fv = inst.delta.free_vars();
        std::set<std::uint32_t> drop;
        std::size_t keep = 1;
        for (auto v : fv) {
            if (keep > 0)
                --keep;
            else
                drop.insert(v);
        }
        if (drop.empty())
            continue;
        target_vocabulary scope = target_vocabulary::make(inst.theory, inst.delta, drop, {});
        cover_result res = eliminate(inst.theory, inst.delta, drop, scope);

        // Soundness: T |= delta -> psi.
        REQUIRE(entails_qff(inst.theory, inst.delta.to_qff(), res.formula));
        // Vocabulary hygiene.
        for (auto v : free_vars(res.formula))
            REQUIRE(drop.count(v) == 0);
        // Strength over every clause of length <= 3.
        vocab names = ts::small_vocab(3, 1, 3, 6);
        ts::strength_checker checker(inst.theory, inst.delta, drop, scope, res.formula, inst.nc,
                                     inst.nr);
        auto violation = checker.first_violation(names);
        if (violation)
            MESSAGE(*violation);
        REQUIRE(!violation);
        ++done;
    }
    CHECK(done >= 25);
    (void)0;
}
