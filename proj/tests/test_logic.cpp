#include <doctest.h>

#include "test_support.hpp"

#include "oreach/logic.hpp"

using namespace oreach;
namespace ts = testsupport;

namespace {

struct logic_fixture {
    vocab v;
    symbol A, B, C, P, a, x, y;
    logic_fixture()
        : A(v.intern("A", symbol_kind::concept_name)),
          B(v.intern("B", symbol_kind::concept_name)),
          C(v.intern("C", symbol_kind::concept_name)),
          P(v.intern("P", symbol_kind::role_name)),
          a(v.intern("a", symbol_kind::individual)),
          x(v.intern("x", symbol_kind::variable)),
          y(v.intern("y", symbol_kind::variable)) {}
};

qff random_formula(ts::rng& r, const std::vector<atom>& atoms, int depth) {
    if (depth == 0 || r.below(4) == 0)
        return qff::of(atoms[r.below(static_cast<std::uint32_t>(atoms.size()))]);
    switch (r.below(3)) {
    case 0: return qff::neg(random_formula(r, atoms, depth - 1));
    case 1:
        return qff::all_of({random_formula(r, atoms, depth - 1),
                            random_formula(r, atoms, depth - 1)});
    default:
        return qff::any_of({random_formula(r, atoms, depth - 1),
                            random_formula(r, atoms, depth - 1)});
    }
}

} // namespace

TEST_CASE("substitution replaces exactly the mapped variables") {
    logic_fixture f;
    term tx = term::var(f.x), ty = term::var(f.y), ta = term::ind(f.a);

    qff ax = qff::of(atom::concept_app(f.A, tx));
    qff out = substitute(ax, {{f.x.id, ta}});
    CHECK(out.same_as(qff::of(atom::concept_app(f.A, ta))));

    // x=y & P(x,y) under {x -> y}
    qff g = qff::all_of({qff::of(atom::equality(tx, ty)), qff::of(atom::role_app(f.P, tx, ty))});
    qff h = substitute(g, {{f.x.id, ty}});
    qff expect =
        qff::all_of({qff::of(atom::equality(ty, ty)), qff::of(atom::role_app(f.P, ty, ty))});
    CHECK(h.same_as(expect));
}

TEST_CASE("substitution is simultaneous, not sequential") {
    logic_fixture f;
    term tx = term::var(f.x), ty = term::var(f.y);
    // {x -> y, y -> x} swaps the arguments.
    qff g = qff::of(atom::role_app(f.P, tx, ty));
    qff h = substitute(g, {{f.x.id, ty}, {f.y.id, tx}});
    CHECK(h.same_as(qff::of(atom::role_app(f.P, ty, tx))));
}

TEST_CASE("substitution composes when domains and ranges are disjoint") {
    logic_fixture f;
    ts::rng r(7);
    std::vector<atom> atoms{atom::concept_app(f.A, term::var(f.x)),
                            atom::role_app(f.P, term::var(f.x), term::var(f.y)),
                            atom::equality(term::var(f.y), term::ind(f.a))};
    symbol z = f.v.intern("z", symbol_kind::variable);
    for (int i = 0; i < 50; ++i) {
        qff g = random_formula(r, atoms, 3);
        substitution s1{{f.x.id, term::var(z)}};         // x -> z
        substitution s2{{f.y.id, term::ind(f.a)}};       // y -> a
        qff lhs = substitute(substitute(g, s1), s2);
        substitution composed{{f.x.id, term::var(z)}, {f.y.id, term::ind(f.a)}};
        qff rhs = substitute(g, composed);
        CHECK(lhs.same_as(rhs));
    }
}

TEST_CASE("to_dnf distributes and prunes contradictions") {
    logic_fixture f;
    qff ax = qff::of(atom::concept_app(f.A, term::var(f.x)));
    qff bx = qff::of(atom::concept_app(f.B, term::var(f.x)));
    qff cx = qff::of(atom::concept_app(f.C, term::var(f.x)));

    auto dnf = to_dnf(qff::all_of({qff::any_of({ax, bx}), cx}));
    REQUIRE(dnf.size() == 2);
    CHECK(dnf[0].literals().size() == 2);
    CHECK(dnf[0].literals()[0] == literal{atom::concept_app(f.A, term::var(f.x)), true});
    CHECK(dnf[1].literals()[0] == literal{atom::concept_app(f.B, term::var(f.x)), true});

    CHECK(to_dnf(qff::all_of({ax, qff::neg(ax)})).empty());
    CHECK(to_dnf(qff::bottom()).empty());
    // true has the empty cube as its DNF
    auto top = to_dnf(qff::top());
    REQUIRE(top.size() == 1);
    CHECK(top[0].empty());
}

TEST_CASE("to_dnf round-trips on random formulas over few atoms") {
    logic_fixture f;
    std::vector<atom> atoms{
        atom::concept_app(f.A, term::var(f.x)), atom::concept_app(f.B, term::var(f.x)),
        atom::concept_app(f.C, term::var(f.y)), atom::role_app(f.P, term::var(f.x), term::var(f.y)),
        atom::equality(term::var(f.x), term::var(f.y)),
        atom::equality(term::var(f.x), term::ind(f.a))};
    ts::rng r(42);
    for (int round = 0; round < 120; ++round) {
        qff g = random_formula(r, atoms, 4);
        auto dnf = to_dnf(g);
        // Compare truth tables over all valuations of the six atoms.
        for (std::uint32_t val = 0; val < (1u << atoms.size()); ++val) {
            auto assign = [&](const atom& at) {
                auto it = std::find(atoms.begin(), atoms.end(), at);
                return (val >> (it - atoms.begin())) & 1;
            };
            bool lhs = eval_propositional(g, assign);
            bool rhs = false;
            for (const auto& cube : dnf) {
                bool all = true;
                for (const auto& l : cube.literals())
                    all = all && (assign(l.at) == l.positive);
                rhs = rhs || all;
            }
            REQUIRE(lhs == rhs);
        }
    }
}

TEST_CASE("to_dnf enforces its literal budget") {
    // (a1|b1) & (a2|b2) & ... blows up exponentially.
    vocab v;
    std::vector<qff> conj;
    for (int i = 0; i < 24; ++i) {
        symbol ai = v.intern("A" + std::to_string(i), symbol_kind::concept_name);
        symbol bi = v.intern("B" + std::to_string(i), symbol_kind::concept_name);
        symbol x = i == 0 ? v.intern("x", symbol_kind::variable) : *v.lookup("x");
        conj.push_back(qff::any_of({qff::of(atom::concept_app(ai, term::var(x))),
                                    qff::of(atom::concept_app(bi, term::var(x)))}));
    }
    CHECK_THROWS_AS(to_dnf(qff::all_of(conj), 10000), resource_error);
}

TEST_CASE("free variables and signatures") {
    logic_fixture f;
    qff g = qff::all_of({qff::of(atom::concept_app(f.A, term::var(f.x))),
                         qff::of(atom::role_app(f.P, term::ind(f.a), term::var(f.y)))});
    auto fv = free_vars(g);
    CHECK(fv == std::set<std::uint32_t>{f.x.id, f.y.id});

    signature s = sig_of(qff::of(atom::concept_app(f.A, term::ind(f.a))));
    CHECK(s.concepts == std::set<std::uint32_t>{f.A.id});
    CHECK(s.roles.empty());
    CHECK(s.individuals == std::set<std::uint32_t>{f.a.id});
}

TEST_CASE("signature of a substituted formula stays within the expected bound") {
    logic_fixture f;
    ts::rng r(11);
    std::vector<atom> atoms{atom::concept_app(f.A, term::var(f.x)),
                            atom::role_app(f.P, term::var(f.x), term::var(f.y)),
                            atom::equality(term::var(f.y), term::var(f.x))};
    for (int i = 0; i < 60; ++i) {
        qff g = random_formula(r, atoms, 3);
        substitution sigma{{f.x.id, term::ind(f.a)}};
        signature before = sig_of(g);
        signature after = sig_of(substitute(g, sigma));
        signature bound = before;
        bound.individuals.insert(f.a.id);
        CHECK(std::includes(bound.concepts.begin(), bound.concepts.end(),
                            after.concepts.begin(), after.concepts.end()));
        CHECK(std::includes(bound.roles.begin(), bound.roles.end(), after.roles.begin(),
                            after.roles.end()));
        CHECK(std::includes(bound.individuals.begin(), bound.individuals.end(),
                            after.individuals.begin(), after.individuals.end()));
    }
}

TEST_CASE("constraints deduplicate and detect complementary pairs") {
    logic_fixture f;
    literal l1{atom::concept_app(f.A, term::var(f.x)), true};
    constraint c;
    c.push(l1);
    c.push(l1);
    CHECK(c.size() == 1);
    CHECK(!c.has_complementary_pair());
    c.push(l1.negated());
    CHECK(c.has_complementary_pair());
}

TEST_CASE("clauses sort, deduplicate and spot tautologies") {
    logic_fixture f;
    literal l1{atom::concept_app(f.A, term::var(f.x)), true};
    literal l2{atom::concept_app(f.B, term::var(f.x)), false};
    clause cl({l1, l2, l1});
    CHECK(cl.size() == 2);
    CHECK(!cl.is_tautological());
    clause taut({l1, l1.negated()});
    CHECK(taut.is_tautological());
}

TEST_CASE("vocab rejects kind clashes and empty names") {
    vocab v;
    v.intern("Thing", symbol_kind::concept_name);
    CHECK_THROWS_AS(v.intern("Thing", symbol_kind::role_name), vocab_error);
    CHECK_THROWS_AS(v.intern("", symbol_kind::concept_name), vocab_error);
    CHECK(v.intern("Thing", symbol_kind::concept_name).id == 0); // idempotent
}
