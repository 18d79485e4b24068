#pragma once

#include "oreach/logic.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace oreach {

// R ::= P | P^-
struct role_expr {
    std::uint32_t role = 0;
    bool inverse = false;

    friend bool operator==(role_expr, role_expr) = default;
};

// C ::= A1 & ... & An | exists R | exists R.A
struct concept_expr {
    enum class kind : std::uint8_t { conjunction, some_top, some_qualified };
    kind k = kind::conjunction;
    std::vector<std::uint32_t> conjuncts; // kind::conjunction, nonempty
    role_expr role;                       // some_top / some_qualified
    std::uint32_t qualifier = 0;          // some_qualified

    static concept_expr conj(std::vector<std::uint32_t> names);
    static concept_expr some(role_expr r);
    static concept_expr some(role_expr r, std::uint32_t concept_name);

    friend bool operator==(const concept_expr&, const concept_expr&) = default;
};

// C <= B or C <= not B, with B always a concept name.
struct concept_inclusion {
    concept_expr lhs;
    std::uint32_t rhs_concept = 0;
    bool rhs_negated = false;

    friend bool operator==(const concept_inclusion&, const concept_inclusion&) = default;
};

// R <= R' or R <= not R'.
struct role_inclusion {
    role_expr lhs;
    role_expr rhs;
    bool rhs_negated = false;

    friend bool operator==(const role_inclusion&, const role_inclusion&) = default;
};

// A(a), P(a,b) or a=b, each possibly negated. Only names occur in assertions.
struct assertion {
    enum class kind : std::uint8_t { concept_assert, role_assert, equality_assert };
    kind k = kind::concept_assert;
    bool positive = true;
    std::uint32_t pred = 0; // concept / role id
    std::uint32_t a = 0, b = 0; // individual ids

    literal to_literal() const;
    friend bool operator==(const assertion&, const assertion&) = default;
};

using tbox_axiom = std::variant<concept_inclusion, role_inclusion>;

struct ontology {
    std::vector<tbox_axiom> tbox;
    std::vector<assertion> abox;

    signature sig() const;
};

// One universal sentence of the translated theory. Every clause matches one
// of five forms (lambda is B or not B, each role occurrence P(x,y) or P(y,x)):
//   (1) forall x (A1(x) & ... & An(x) -> lambda(x))
//   (2) forall x,y (R1(x,y) -> lambda(x))
//   (3) forall x,y (R1(x,y) & A(y) -> lambda(x))
//   (4) forall x,y (R1(x,y) -> R2(x,y))
//   (5) forall x,y (R1(x,y) -> not R2(x,y))
struct universal_clause {
    enum class shape : std::uint8_t {
        concept_subsumption,  // (1)
        role_domain,          // (2)
        qualified_role_domain,// (3)
        role_subsumption,     // (4)
        role_disjointness,    // (5)
    };
    shape s = shape::concept_subsumption;
    std::vector<std::uint32_t> lhs_concepts; // (1)
    role_expr r1;                            // (2)-(5)
    std::uint32_t qualifier = 0;             // (3)
    role_expr r2;                            // (4),(5)
    std::uint32_t rhs_concept = 0;           // (1)-(3)
    bool rhs_negated = false;                // (1)-(3)

    bool binary() const { return s != shape::concept_subsumption; }

    // Ground instance as a disjunctive clause over the given terms
    // (y ignored for shape (1)).
    clause instantiate(term x, term y) const;

    friend bool operator==(const universal_clause&, const universal_clause&) = default;
};

// T(O): finitely many universal clauses plus the ABox as ground literals.
struct universal_theory {
    std::vector<universal_clause> clauses;
    std::vector<literal> ground;

    signature sig() const;
};

// Well-formedness diagnostics; empty iff the ontology conforms to the grammar.
std::vector<std::string> validate(const ontology& o, const vocab& v);

// The standard translation: one clause per TBox axiom, one ground literal per
// ABox assertion.
universal_theory standard_translate(const ontology& o);

// Extends the ABox with not A(u), not P(u,a), not P(a,u) for every concept A,
// role P and individual a of sig(o) together with u itself, so u denotes an
// undefined value. Idempotent.
ontology undefined_value_closure(const ontology& o, symbol u);

std::string to_string(const universal_clause& c, const vocab& v);
std::string to_string(const tbox_axiom& ax, const vocab& v);
std::string to_string(const assertion& a, const vocab& v);

} // namespace oreach
