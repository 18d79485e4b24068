#include <doctest.h>

#include "test_support.hpp"

#include "oreach/oracle.hpp"

using namespace oreach;
namespace ts = testsupport;

namespace {

// The asserted hiring facts closed under the positive inclusions, no roles.
finite_interpretation canonical_hiring_model(const ts::hiring_fixture& f) {
    finite_interpretation i;
    signature s = f.raw.sig();
    std::vector<std::uint32_t> inds(s.individuals.begin(), s.individuals.end());
    for (std::uint32_t e = 0; e < inds.size(); ++e) {
        i.add_element(e);
        i.constant_map[inds[e]] = e;
    }
    auto put = [&](const char* concept_name, const char* ind_name) {
        i.add_concept(f.v.lookup(concept_name)->id, i.constant_map.at(f.v.lookup(ind_name)->id));
    };
    put("AcademicPosition", "professor123");
    put("AcademicPosition", "researcher123");
    put("AdminPosition", "secretary123");
    put("AdminPosition", "secretary456");
    // Subsumption closure.
    put("JobPosition", "professor123");
    put("JobPosition", "researcher123");
    put("JobPosition", "secretary123");
    put("JobPosition", "secretary456");
    return i;
}

} // namespace

TEST_CASE("the closed assertion set models the hiring ontology both ways") {
    ts::hiring_fixture f;
    finite_interpretation i = canonical_hiring_model(f);
    CHECK(check_model_dl(i, f.raw));
    CHECK(check_model(i, standard_translate(f.raw)));

    // An element in both position kinds breaks the disjointness inclusion.
    finite_interpretation bad = i;
    bad.add_concept(f.concept_id("AdminPosition"),
                    bad.constant_map.at(f.v.lookup("professor123")->id));
    CHECK(!check_model_dl(bad, f.raw));
    CHECK(!check_model(bad, standard_translate(f.raw)));

    CHECK(check_model(i, universal_theory{}));
}

TEST_CASE("model enumeration counts on one-element domains") {
    // No theory, one concept, no constants: the concept is empty or full.
    enumeration_scope scope;
    scope.concepts = {0};
    std::size_t count = 0;
    enumerate_models(universal_theory{}, scope, 1,
                     [&](const finite_interpretation&) { ++count; return true; });
    CHECK(count == 2);

    // A -> B over one element: the three assignments not violating it.
    universal_clause ab;
    ab.s = universal_clause::shape::concept_subsumption;
    ab.lhs_concepts = {0};
    ab.rhs_concept = 1;
    universal_theory t;
    t.clauses.push_back(ab);
    enumeration_scope scope2;
    scope2.concepts = {0, 1};
    count = 0;
    enumerate_models(t, scope2, 1, [&](const finite_interpretation&) { ++count; return true; });
    CHECK(count == 3);

    // Contradictory ground literals admit no models.
    universal_theory t2;
    term c0{false, 0};
    t2.ground.push_back(literal{atom{atom_kind::concept_app, 0, c0, {}}, true});
    t2.ground.push_back(literal{atom{atom_kind::concept_app, 0, c0, {}}, false});
    enumeration_scope scope3;
    scope3.concepts = {0};
    scope3.individuals = {0};
    count = 0;
    enumerate_models(t2, scope3, 1, [&](const finite_interpretation&) { ++count; return true; });
    CHECK(count == 0);
}

TEST_CASE("embeddings, homomorphisms, substructures") {
    finite_interpretation i;
    i.add_element(0);
    i.add_element(1);
    i.add_concept(0, 0);
    i.add_role(0, 0, 1);
    signature sigma;
    sigma.concepts = {0};
    sigma.roles = {0};

    morphism identity{&i, &i, {{0, 0}, {1, 1}}};
    CHECK(is_homomorphism(identity, sigma));
    CHECK(is_embedding(identity, sigma));

    morphism collapse{&i, &i, {{0, 0}, {1, 0}}};
    CHECK(!is_embedding(collapse, sigma));

    // A homomorphism that is not an embedding: the target has an extra atom.
    finite_interpretation j = i;
    j.add_concept(0, 1);
    morphism into{&i, &j, {{0, 0}, {1, 1}}};
    CHECK(is_homomorphism(into, sigma));
    CHECK(!is_embedding(into, sigma));

    finite_interpretation sub;
    sub.add_element(0);
    sub.add_concept(0, 0);
    CHECK(is_substructure(sub, i, sigma));
    finite_interpretation lone;
    lone.add_element(1); // {1} carries no atoms in i either
    CHECK(is_substructure(lone, i, sigma));
    finite_interpretation wrong;
    wrong.add_element(0); // misses A(0)
    CHECK(!is_substructure(wrong, i, sigma));
}

TEST_CASE("amalgamation basics") {
    signature sigma;
    sigma.concepts = {0, 1, 2};

    finite_interpretation i0;
    i0.add_element(0);
    i0.add_concept(0, 0);

    // Trivial amalgam of identical parts.
    finite_interpretation same = amalgamate(i0, i0, i0, sigma);
    CHECK(same == i0);

    finite_interpretation i1 = i0;
    i1.add_element(1);
    i1.add_concept(1, 1);
    finite_interpretation i2 = i0;
    i2.add_element(2);
    i2.add_concept(2, 2);
    finite_interpretation glued = amalgamate(i1, i2, i0, sigma);
    CHECK(glued.domain == std::vector<std::uint32_t>{0, 1, 2});
    CHECK(glued.in_concept(0, 0));
    CHECK(glued.in_concept(1, 1));
    CHECK(glued.in_concept(2, 2));
    morphism m1{&i1, &glued, {{0, 0}, {1, 1}}};
    morphism m2{&i2, &glued, {{0, 0}, {2, 2}}};
    CHECK(is_embedding(m1, sigma));
    CHECK(is_embedding(m2, sigma));

    // Domains overlapping outside the shared part violate the precondition.
    finite_interpretation i3 = i0;
    i3.add_element(1);
    CHECK_THROWS_AS(amalgamate(i1, i3, i0, sigma), std::invalid_argument);
}

TEST_CASE("randomized amalgams over the hiring signature model the theory") {
    ts::hiring_fixture f;
    universal_theory t = standard_translate(f.raw);
    signature sigma = f.raw.sig();
    std::vector<std::uint32_t> inds(sigma.individuals.begin(), sigma.individuals.end());
    ts::rng r(7);

    int built = 0;
    for (int round = 0; round < 60; ++round) {
        auto bases = sample_models(t, inds, 3, 1, r.next());
        if (bases.empty())
            continue;
        finite_interpretation i0 = bases[0];

        // Extend the shared model twice, adding atoms only on new elements;
        // retry the random extension until it satisfies the theory.
        auto extend = [&](std::uint32_t fresh) {
            for (int attempt = 0; attempt < 30; ++attempt) {
                finite_interpretation ext = i0;
                ext.add_element(fresh);
                for (auto c : sigma.concepts)
                    if (r.below(3) == 0)
                        ext.add_concept(c, fresh);
                for (auto rl : sigma.roles)
                    for (auto e : ext.domain) {
                        if (r.below(4) == 0)
                            ext.add_role(rl, fresh, e);
                        if (r.below(4) == 0)
                            ext.add_role(rl, e, fresh);
                    }
                if (check_model(ext, t))
                    return ext;
            }
            return i0; // degenerate fallback: the shared model itself
        };
        finite_interpretation i1 = extend(100);
        finite_interpretation i2 = extend(200);
        if (!is_substructure(i0, i1, sigma) || !is_substructure(i0, i2, sigma))
            continue;
        finite_interpretation glued = amalgamate(i1, i2, i0, sigma);
        REQUIRE(check_model(glued, t));
        morphism m1{&i1, &glued, {}}, m2{&i2, &glued, {}};
        for (auto e : i1.domain)
            m1.element_map[e] = e;
        for (auto e : i2.domain)
            m2.element_map[e] = e;
        REQUIRE(is_embedding(m1, sigma));
        REQUIRE(is_embedding(m2, sigma));
        ++built;
    }
    CHECK(built > 10);
}

TEST_CASE("sampled models satisfy the theory and interpret every constant") {
    ts::hiring_fixture f;
    auto models = sample_models(f.theory, f.sys.scope_individuals(), 6, 50, 17);
    CHECK(models.size() >= 25);
    for (const auto& m : models) {
        REQUIRE(check_model(m, f.theory));
        for (auto c : f.sys.scope_individuals())
            REQUIRE(m.constant_map.count(c));
    }
}

TEST_CASE("forward search replays the weak system's violation") {
    ts::hiring_fixture f("hiring_weak.sas");
    forward_options opts;
    opts.model_samples = 500;
    opts.seed = 2;
    forward_result res = bounded_forward_verify(f.sys, f.theory, f.nu, 5, 5, opts);
    REQUIRE(res.violation.has_value());
    CHECK(res.violation->transitions.size() == 4);
    // The violation replays state by state inside its model.
    const auto& v = *res.violation;
    for (std::size_t k = 0; k + 1 < v.states.size(); ++k) {
        auto succ = step_successors(v.model, f.sys, v.states[k]);
        bool found = false;
        for (const auto& [j, next] : succ)
            found = found || (j == v.transitions[k] && next == v.states[k + 1]);
        REQUIRE(found);
    }
    // And the final state satisfies nu.
    std::map<std::uint32_t, std::uint32_t> va;
    for (std::size_t i = 0; i < f.sys.vars.size(); ++i)
        va[f.sys.vars[i]] = v.states.back()[i];
    CHECK(v.model.eval(f.nu, va));
}

TEST_CASE("forward search finds nothing in the original system") {
    ts::hiring_fixture f;
    forward_options opts;
    opts.model_samples = 150;
    forward_result res = bounded_forward_verify(f.sys, f.theory, f.nu, 6, 6, opts);
    CHECK(!res.violation.has_value());
    CHECK(res.models_explored > 100);
}

TEST_CASE("a safety formula satisfiable at the initial state is found at depth zero") {
    ts::hiring_fixture f;
    qff nu0 = parse_formula("x_applicant = u", f.v);
    forward_options opts;
    opts.model_samples = 5;
    forward_result res = bounded_forward_verify(f.sys, f.theory, nu0, 5, 0, opts);
    REQUIRE(res.violation.has_value());
    CHECK(res.violation->transitions.empty());
}
