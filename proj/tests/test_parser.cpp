#include <doctest.h>

#include "test_support.hpp"

#include "oreach/parser.hpp"

using namespace oreach;
namespace ts = testsupport;

TEST_CASE("inclusion forms parse to the right constructors") {
    vocab v;
    std::string text = "AcademicPosition <= JobPosition\n"
                       "exists appliesFor- <= JobPosition\n"
                       "exists suitableFor.AcademicPosition <= Evaluated\n"
                       "User & Graduate <= Eligible\n"
                       "suitableFor <= not appliesFor\n";
    parsed_ontology p = parse_onto(text, "t.onto", v);
    REQUIRE(p.onto.tbox.size() == 5);

    const auto& ci0 = std::get<concept_inclusion>(p.onto.tbox[0]);
    CHECK(ci0.lhs.k == concept_expr::kind::conjunction);
    CHECK(ci0.lhs.conjuncts.size() == 1);

    const auto& ci1 = std::get<concept_inclusion>(p.onto.tbox[1]);
    CHECK(ci1.lhs.k == concept_expr::kind::some_top);
    CHECK(ci1.lhs.role.inverse);

    const auto& ci2 = std::get<concept_inclusion>(p.onto.tbox[2]);
    CHECK(ci2.lhs.k == concept_expr::kind::some_qualified);
    CHECK(!ci2.lhs.role.inverse);

    const auto& ci3 = std::get<concept_inclusion>(p.onto.tbox[3]);
    CHECK(ci3.lhs.conjuncts.size() == 2);

    const auto& ri = std::get<role_inclusion>(p.onto.tbox[4]);
    CHECK(ri.rhs_negated);
    CHECK(v.lookup("suitableFor")->kind == symbol_kind::role_name);
}

TEST_CASE("bare inclusions default to concepts unless evidence says role") {
    vocab v;
    parsed_ontology p = parse_onto("Alpha <= Beta\n", "t.onto", v);
    CHECK(std::holds_alternative<concept_inclusion>(p.onto.tbox[0]));

    vocab v2;
    parsed_ontology q = parse_onto("P <= Q\nexists P <= Thing\n", "t.onto", v2);
    CHECK(std::holds_alternative<role_inclusion>(q.onto.tbox[0]));
}

TEST_CASE("assertions parse with polarity, arity and equality forms") {
    vocab v;
    std::string text = "User(alice)\nnot Graduate(alice)\nappliesFor(alice, job1)\n"
                       "not appliesFor(alice, job2)\nalice = alias\njob1 != job2\n";
    parsed_ontology p = parse_onto(text, "t.onto", v);
    REQUIRE(p.onto.abox.size() == 6);
    CHECK(p.onto.abox[0].positive);
    CHECK(!p.onto.abox[1].positive);
    CHECK(p.onto.abox[2].k == assertion::kind::role_assert);
    CHECK(p.onto.abox[4].k == assertion::kind::equality_assert);
    CHECK(p.onto.abox[4].positive);
    CHECK(!p.onto.abox[5].positive);
}

TEST_CASE("parse errors carry positions and clear messages") {
    vocab v;
    CHECK_THROWS_WITH_AS(parse_onto("User <= exists appliesFor\n", "t.onto", v),
                         doctest::Contains("rhs of a concept inclusion"), parse_error);
    vocab v2;
    CHECK_THROWS_WITH_AS(parse_onto("User(alice\n", "t.onto", v2), doctest::Contains("')'"),
                         parse_error);
    vocab v3;
    CHECK_THROWS_AS(parse_onto("exists <= A\n", "t.onto", v3), parse_error);
    vocab v4;
    parse_onto("User(alice)\n", "t.onto", v4);
    CHECK_THROWS_WITH_AS(parse_onto("User(alice, bob)\n", "t.onto", v4),
                         doctest::Contains("already used"), parse_error);
}

TEST_CASE("sas files parse into total transitions") {
    ts::hiring_fixture f;
    CHECK(f.sys.vars.size() == 5);
    CHECK(f.sys.init.size() == 5);
    REQUIRE(f.sys.transitions.size() == 7);
    for (const auto& tr : f.sys.transitions) {
        CHECK(tr.updates.size() == f.sys.vars.size());
        CHECK(tr.case_free());
    }
    CHECK(f.sys.transitions[0].params.size() == 1);
    CHECK(f.sys.transitions[1].params.empty());
    // Omitted updates became identities.
    const transition& t1 = f.sys.transitions[0];
    for (std::size_t i = 1; i < t1.updates.size(); ++i)
        CHECK(t1.updates[i].plain == (term{true, f.sys.vars[i]}));
}

TEST_CASE("case updates parse into partitions with branch terms") {
    vocab v;
    parsed_ontology po = parse_onto("Flag(c0)\n", "t.onto", v);
    std::string text = "vars x ;\ninit x := c0 ;\n"
                       "transition t : guard Flag(x) ==> x := case { Flag(x) -> c0 | "
                       "not Flag(x) -> x } ;\n";
    parsed_system ps = parse_sas(text, "t.sas", v, po.onto);
    REQUIRE(ps.system.transitions.size() == 1);
    const update& u = ps.system.transitions[0].updates[0];
    REQUIRE(u.is_case);
    CHECK(u.cf.partition.cases.size() == 2);
    CHECK(u.cf.branch_terms.size() == 2);
    CHECK(!u.cf.branch_terms[0].is_variable);
}

TEST_CASE("sas name resolution rejects undeclared and misused names") {
    vocab v;
    parsed_ontology po = parse_onto("User(alice)\n", "t.onto", v);
    CHECK_THROWS_WITH_AS(
        parse_sas("vars x ;\ninit x := alice ;\ntransition t : guard User(ghost) ==> x := x ;\n",
                  "t.sas", v, po.onto),
        doctest::Contains("undeclared name"), parse_error);
    vocab v2;
    parsed_ontology po2 = parse_onto("User(alice)\n", "t.onto", v2);
    CHECK_THROWS_WITH_AS(
        parse_sas("vars x ;\ninit x := alice ;\n"
                  "transition t params y : guard User(y) ==> x := z9 ;\n",
                  "t.sas", v2, po2.onto),
        doctest::Contains("undeclared"), parse_error);
    vocab v3;
    parsed_ontology po3 = parse_onto("User(alice)\n", "t.onto", v3);
    CHECK_THROWS_WITH_AS(parse_sas("vars x ;\n", "t.sas", v3, po3.onto),
                         doctest::Contains("missing 'init'"), parse_error);
    vocab v4;
    parsed_ontology po4 = parse_onto("User(alice)\n", "t.onto", v4);
    CHECK_THROWS_WITH_AS(parse_sas("vars x, x ;\n", "t.sas", v4, po4.onto),
                         doctest::Contains("duplicate variable"), parse_error);
}

TEST_CASE("formula parsing honours precedence and both negation spellings") {
    vocab v;
    parse_onto("User(alice)\nGraduate(alice)\n", "t.onto", v);
    symbol x = v.intern("x", symbol_kind::variable);
    (void)x;
    qff f = parse_formula("User(x) & !Graduate(x) | x = alice", v);
    REQUIRE(f.kind() == qff::node_kind::disjunction);
    CHECK(f.children().size() == 2);
    CHECK(f.children()[0].kind() == qff::node_kind::conjunction);

    qff g = parse_formula("not (User(x) | false) & true", v);
    CHECK(g.kind() == qff::node_kind::negation);

    CHECK(parse_formula("x != alice", v).kind() == qff::node_kind::negation);
    CHECK_THROWS_AS(parse_formula("User(x) &", v), parse_error);
    CHECK_THROWS_AS(parse_formula("Mystery(x)", v), parse_error);
    // In auto-declare mode unknown names become variables and predicates.
    vocab v2;
    qff h = parse_formula("Fresh(zed) & zed = wye", v2, true);
    CHECK(free_vars(h).size() == 2);
}

TEST_CASE("printing and reparsing is the identity on the shipped files") {
    // Ontology round-trip.
    {
        vocab v1;
        parsed_ontology p1 = parse_onto(ts::slurp(ts::data_file("hiring.onto")), "h", v1);
        std::string printed = print_onto(p1.onto, v1);
        vocab v2;
        parsed_ontology p2 = parse_onto(printed, "h2", v2);
        REQUIRE(p1.onto.tbox.size() == p2.onto.tbox.size());
        REQUIRE(p1.onto.abox.size() == p2.onto.abox.size());
        // Same vocabulary order implies identical ids, so direct equality works.
        CHECK(p1.onto.tbox == p2.onto.tbox);
        CHECK(p1.onto.abox == p2.onto.abox);
        CHECK(print_onto(p2.onto, v2) == printed);
    }
    // System round-trip, including the weak variant.
    for (const char* name : {"hiring.sas", "hiring_weak.sas"}) {
        vocab v1;
        parsed_ontology p1 = parse_onto(ts::slurp(ts::data_file("hiring.onto")), "h", v1);
        parsed_system s1 = parse_sas(ts::slurp(ts::data_file(name)), name, v1, p1.onto);
        std::string printed = print_sas(s1.system, v1);
        vocab v2;
        parsed_ontology p2 = parse_onto(ts::slurp(ts::data_file("hiring.onto")), "h", v2);
        parsed_system s2 = parse_sas(printed, name, v2, p2.onto);
        CHECK(s1.system.vars == s2.system.vars);
        CHECK(s1.system.init == s2.system.init);
        CHECK(s1.system.transitions == s2.system.transitions);
        CHECK(print_sas(s2.system, v2) == printed);
    }
}

TEST_CASE("random ontologies round-trip through print and parse") {
    ts::rng r(606);
    for (int round = 0; round < 40; ++round) {
        vocab v = ts::small_vocab(3, 2, 3, 0);
        ontology o;
        std::uint32_t n_ci = 1 + r.below(4);
        for (std::uint32_t i = 0; i < n_ci; ++i) {
            concept_inclusion ci;
            switch (r.below(3)) {
            case 0: {
                std::vector<std::uint32_t> conj{r.below(3)};
                if (r.coin() && conj[0] != (conj[0] + 1) % 3)
                    conj.push_back((conj[0] + 1) % 3);
                ci.lhs = concept_expr::conj(conj);
                break;
            }
            case 1: ci.lhs = concept_expr::some(role_expr{r.below(2), r.coin()}); break;
            default:
                ci.lhs = concept_expr::some(role_expr{r.below(2), r.coin()}, r.below(3));
            }
            ci.rhs_concept = r.below(3);
            ci.rhs_negated = r.coin();
            o.tbox.emplace_back(ci);
        }
        if (r.coin()) {
            role_inclusion ri;
            ri.lhs = {r.below(2), r.coin()};
            ri.rhs = {r.below(2), r.coin()};
            ri.rhs_negated = r.coin();
            o.tbox.emplace_back(ri);
        }
        std::uint32_t n_as = r.below(4);
        for (std::uint32_t i = 0; i < n_as; ++i) {
            assertion a;
            a.positive = r.coin();
            switch (r.below(3)) {
            case 0:
                a.k = assertion::kind::concept_assert;
                a.pred = r.below(3);
                a.a = r.below(3);
                break;
            case 1:
                a.k = assertion::kind::role_assert;
                a.pred = r.below(2);
                a.a = r.below(3);
                a.b = r.below(3);
                break;
            default:
                a.k = assertion::kind::equality_assert;
                a.a = r.below(3);
                a.b = r.below(3);
            }
            o.abox.push_back(a);
        }
        // Printing, reparsing into a fresh vocabulary and printing again is
        // the identity; symbol ids may differ but the rendered text cannot.
        std::string text1 = print_onto(o, v);
        vocab v2;
        parsed_ontology p2 = parse_onto(text1, "rt", v2);
        REQUIRE(p2.onto.tbox.size() == o.tbox.size());
        REQUIRE(p2.onto.abox.size() == o.abox.size());
        CHECK(print_onto(p2.onto, v2) == text1);
    }
}

TEST_CASE("random formulas round-trip through print and parse") {
    ts::rng r(808);
    for (int round = 0; round < 60; ++round) {
        vocab v = ts::small_vocab(3, 1, 3, 4);
        ts::small_instance inst = ts::random_instance(r);
        qff f = inst.delta.to_qff();
        qff g = parse_formula(print_formula(f, v), v);
        CHECK(f.same_as(g));
    }
}
