#include <doctest.h>

#include "test_support.hpp"

#include "oreach/ground_sat.hpp"
#include "oreach/oracle.hpp"

#include <sstream>

using namespace oreach;
namespace ts = testsupport;

TEST_CASE("the sat core agrees with brute-force evaluation on random CNFs") {
    ts::rng r(90210);
    for (int round = 0; round < 300; ++round) {
        std::uint32_t nvars = 3 + r.below(8);
        std::uint32_t nclauses = 1 + r.below(4 * nvars);
        std::vector<std::vector<sat::lit>> clauses;
        for (std::uint32_t c = 0; c < nclauses; ++c) {
            std::vector<sat::lit> cl;
            std::uint32_t len = 1 + r.below(3);
            for (std::uint32_t k = 0; k < len; ++k)
                cl.push_back(sat::mk_lit(r.below(nvars), r.coin()));
            clauses.push_back(std::move(cl));
        }
        // Brute force over all assignments.
        bool brute = false;
        for (std::uint32_t mask = 0; mask < (1u << nvars) && !brute; ++mask) {
            bool all = true;
            for (const auto& cl : clauses) {
                bool some = false;
                for (auto l : cl)
                    some = some || (((mask >> sat::var_of(l)) & 1) == sat::sign_of(l));
                all = all && some;
            }
            brute = all;
        }
        sat::solver s;
        for (std::uint32_t i = 0; i < nvars; ++i)
            s.new_var();
        for (auto& cl : clauses)
            s.add_clause(std::move(cl));
        bool fast = s.solve() == sat::status::satisfiable;
        REQUIRE(fast == brute);
        // Assumption solving agrees with conditioning, and cores are real.
        std::vector<sat::lit> assume{sat::mk_lit(0, r.coin()), sat::mk_lit(1, r.coin())};
        bool under = false;
        for (std::uint32_t mask = 0; mask < (1u << nvars) && !under; ++mask) {
            bool ok = true;
            for (auto a : assume)
                ok = ok && (((mask >> sat::var_of(a)) & 1) == sat::sign_of(a));
            for (const auto& cl : clauses) {
                bool some = false;
                for (auto l : cl)
                    some = some || (((mask >> sat::var_of(l)) & 1) == sat::sign_of(l));
                ok = ok && some;
            }
            under = ok;
        }
        sat::solver s2;
        for (std::uint32_t i = 0; i < nvars; ++i)
            s2.new_var();
        bool consistent = true;
        for (const auto& cl : clauses)
            consistent &= s2.add_clause(std::vector<sat::lit>(cl));
        bool fast2 = consistent && s2.solve(assume) == sat::status::satisfiable;
        REQUIRE(fast2 == under);
        if (!fast2 && consistent && fast) {
            // Failed only under assumptions: the core names assumptions.
            for (auto l : s2.conflict_core())
                REQUIRE(std::find(assume.begin(), assume.end(), l) != assume.end());
        }
    }
}

TEST_CASE("grounding instantiates clauses over the whole domain") {
    universal_clause c;
    c.s = universal_clause::shape::role_disjointness;
    c.r1 = {0, false};
    c.r2 = {1, false};
    universal_theory t;
    t.clauses.push_back(c);

    grounding_domain d;
    d.elements.push_back({grounding_domain::element::origin::individual, 0});
    d.elements.push_back({grounding_domain::element::origin::individual, 1});
    atom_encoder enc(d, 1, 2);
    std::size_t theory_clauses = 0;
    emit_theory_clauses(t, enc, [&](std::vector<sat::lit>) { ++theory_clauses; });
    // Four instantiations of the clause plus congruence: no triple exists,
    // and per ordered pair one unary plus two-per-argument role rules.
    std::size_t congruence = 2 * (1 * 1 + 2 * 2 * 2);
    CHECK(theory_clauses == 4 + congruence);

    // Empty theory over a single constant grounds to nothing at all.
    grounding_domain d1;
    d1.elements.push_back({grounding_domain::element::origin::individual, 0});
    atom_encoder enc1(d1, 1, 2);
    std::size_t none = 0;
    emit_theory_clauses(universal_theory{}, enc1, [&](std::vector<sat::lit>) { ++none; });
    CHECK(none == 0);
}

TEST_CASE("hiring grounding size follows the per-shape instantiation counts") {
    ts::hiring_fixture f;
    universal_theory raw = standard_translate(f.raw);
    // Domain: the four named positions plus u.
    grounding_domain d;
    for (auto ind : f.onto.sig().individuals)
        d.elements.push_back({grounding_domain::element::origin::individual, ind});
    REQUIRE(d.size() == 5);
    atom_encoder enc(d, f.v.count(symbol_kind::concept_name), f.v.count(symbol_kind::role_name));
    std::size_t total = 0;
    emit_theory_clauses(raw, enc, [&](std::vector<sat::lit>) { ++total; });
    std::size_t unary_shapes = 7, binary_shapes = 5, n = 5;
    std::size_t tbox_insts = unary_shapes * n + binary_shapes * n * n;
    std::size_t ground = raw.ground.size();
    std::size_t congruence_triples = 3 * (n * (n - 1) * (n - 2) / 6);
    std::size_t congruence_preds = n * (n - 1) * (7 * 1 + 2 * 2 * n);
    CHECK(total == tbox_insts + ground + congruence_triples + congruence_preds);
}

TEST_CASE("satisfiability on the hiring theory matches the worked examples") {
    ts::hiring_fixture f;
    symbol x = f.v.intern("q_x", symbol_kind::variable);

    qff both = qff::all_of(
        {qff::of(atom::concept_app(*f.v.lookup("AcademicPosition"), term::var(x))),
         qff::of(atom::concept_app(*f.v.lookup("AdminPosition"), term::var(x)))});
    CHECK(!sat_qff(f.theory, both).satisfiable);

    CHECK(sat_qff(f.theory, qff::of(atom::equality(term::var(x), term::var(x)))).satisfiable);

    qff user_not_eligible =
        qff::all_of({qff::of(atom::concept_app(*f.v.lookup("User"), term::var(x))),
                     qff::neg(qff::of(atom::concept_app(*f.v.lookup("EligibleUser"),
                                                        term::var(x))))});
    CHECK(sat_qff(f.theory, user_not_eligible).satisfiable);

    // nu & iota: every variable equals u, and the closure denies User(u).
    qff nu_iota = qff::all_of({f.sys.initial_formula(), f.nu});
    CHECK(!sat_qff(f.theory, nu_iota).satisfiable);
}

TEST_CASE("entailment via unsatisfiability") {
    universal_clause ab;
    ab.s = universal_clause::shape::concept_subsumption;
    ab.lhs_concepts = {0};
    ab.rhs_concept = 1;
    universal_theory t;
    t.clauses.push_back(ab);

    term y{true, 0};
    constraint delta;
    delta.push(literal{atom{atom_kind::concept_app, 0, y, {}}, true});
    clause chi({literal{atom{atom_kind::concept_app, 1, y, {}}, true}});
    CHECK(entails(t, delta, chi));
    CHECK(!entails(universal_theory{}, delta, chi));
}

TEST_CASE("hiring entailment: users are not academic positions") {
    ts::hiring_fixture f;
    symbol y = f.v.intern("q_y", symbol_kind::variable);
    constraint delta;
    delta.push(literal{atom::concept_app(*f.v.lookup("User"), term::var(y)), true});
    clause chi({literal{atom::concept_app(*f.v.lookup("AcademicPosition"), term::var(y)), false}});
    CHECK(entails(f.theory, delta, chi));
}

TEST_CASE("sat witnesses lift to genuine models") {
    ts::rng r(314);
    int sats = 0;
    for (int round = 0; round < 150; ++round) {
        ts::small_instance inst = ts::random_instance(r);
        qff g = inst.delta.to_qff();
        auto model = solve_model(inst.theory, g);
        if (!model)
            continue;
        ++sats;
        REQUIRE(check_model(model->interp, inst.theory));
        std::map<std::uint32_t, std::uint32_t> va = model->var_class;
        REQUIRE(model->interp.eval(g, va));
    }
    CHECK(sats > 30);
}

TEST_CASE("satisfiability is monotone under conjunction") {
    ts::rng r(2718);
    for (int round = 0; round < 120; ++round) {
        ts::small_instance inst = ts::random_instance(r);
        constraint extra;
        extra.push(ts::random_literal(r, inst.nc, inst.nr, inst.ni, inst.nv));
        qff weak = inst.delta.to_qff();
        qff strong = qff::all_of({weak, extra.to_qff()});
        if (sat_qff(inst.theory, strong).satisfiable)
            CHECK(sat_qff(inst.theory, weak).satisfiable);
    }
}

TEST_CASE("grounded satisfiability agrees with brute-force enumeration") {
    ts::rng r(555);
    int checked = 0;
    for (int round = 0; round < 150; ++round) {
        ts::small_instance inst = ts::random_instance(r, 2, 4);
        qff g = inst.delta.to_qff();
        bool fast = sat_qff(inst.theory, g).satisfiable;
        bool brute = satisfiable_by_enumeration(inst.theory, g);
        REQUIRE(fast == brute);
        ++checked;
    }
    CHECK(checked == 150);
}

TEST_CASE("equality inlining shrinks chained constraints") {
    term x0{true, 0}, x1{true, 1}, x2{true, 2}, c0{false, 0};
    qff g = qff::all_of({qff::of(atom::equality(x0, x1)), qff::of(atom::equality(x1, x2)),
                         qff::of(atom::equality(x2, c0)),
                         qff::of(atom{atom_kind::concept_app, 0, x0, {}})});
    auto [reduced, sigma] = inline_equalities(g);
    CHECK(sigma.size() == 3);
    auto fv = free_vars(reduced);
    CHECK(fv.empty()); // everything resolves to the constant
    CHECK(sat_qff(universal_theory{}, g).satisfiable);

    // Witnesses still assign the substituted variables.
    auto model = solve_model(universal_theory{}, g);
    REQUIRE(model);
    REQUIRE(model->var_class.count(0));
    REQUIRE(model->var_class.count(1));
    REQUIRE(model->var_class.count(2));
    CHECK(model->var_class[0] == model->var_class[2]);
}

TEST_CASE("dimacs dump uses the standard header") {
    ts::hiring_fixture f;
    grounding_domain d;
    for (auto ind : f.onto.sig().individuals)
        d.elements.push_back({grounding_domain::element::origin::individual, ind});
    sat_session session(f.theory, d, f.v.count(symbol_kind::concept_name),
                        f.v.count(symbol_kind::role_name));
    std::ostringstream os;
    session.dump_dimacs(os);
    std::string text = os.str();
    REQUIRE(text.rfind("p cnf ", 0) == 0);
    std::istringstream is(text);
    std::string p, cnf;
    std::size_t vars = 0, clauses = 0;
    is >> p >> cnf >> vars >> clauses;
    CHECK(vars > 0);
    CHECK(clauses > 0);
    // Count clause terminators.
    std::size_t zeros = 0;
    std::string tok;
    while (is >> tok)
        zeros += tok == "0";
    CHECK(zeros == clauses);
}

TEST_CASE("sessions answer many queries over one grounding") {
    ts::hiring_fixture f;
    std::vector<std::uint32_t> vars = f.sys.vars;
    qff iota = f.sys.initial_formula();
    const qff* fs[] = {&iota, &f.nu};
    grounding_domain d = build_domain(f.theory, fs, f.sys.scope_individuals(), vars);
    sat_session session(f.theory, d, f.v.count(symbol_kind::concept_name),
                        f.v.count(symbol_kind::role_name));
    CHECK(session.query(f.nu));
    CHECK(!session.query(qff::all_of({iota, f.nu})));
    CHECK(session.query(iota));
    // Verdicts expose liftable witnesses.
    sat_verdict verdict = session.last_verdict();
    REQUIRE(verdict.satisfiable);
    lifted_model lifted = lift_witness(session.encoder(), verdict);
    CHECK(check_model(lifted.interp, f.theory));
}
