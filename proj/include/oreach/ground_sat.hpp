#pragma once

#include "oreach/interpretation.hpp"
#include "oreach/logic.hpp"
#include "oreach/ontology.hpp"
#include "oreach/sat.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace oreach {

// The constants a satisfiability query is grounded over: the individuals of
// the theory and query, one fresh constant per free variable, and a padding
// constant when the list would otherwise be empty (FO domains are nonempty).
struct grounding_domain {
    struct element {
        enum class origin : std::uint8_t { individual, variable, padding };
        origin from;
        std::uint32_t id; // individual or variable id
    };
    std::vector<element> elements;

    std::optional<std::uint32_t> index_of(const term& t) const;
    std::size_t size() const { return elements.size(); }
};

grounding_domain
build_domain(const universal_theory& t, std::span<const qff* const> formulas,
             std::span<const std::uint32_t> extra_individuals = {},
             std::span<const std::uint32_t> extra_variables = {});

// Maps ground atoms over a fixed domain to SAT variables. Equality atoms
// share one variable per unordered element pair; eq(e,e) is constant true.
class atom_encoder {
public:
    atom_encoder(grounding_domain d, std::uint32_t n_concepts, std::uint32_t n_roles);

    const grounding_domain& domain() const { return dom_; }
    std::uint32_t num_vars() const;
    std::uint32_t n_concepts() const { return n_concepts_; }
    std::uint32_t n_roles() const { return n_roles_; }

    std::uint32_t unary_var(std::uint32_t concept_id, std::uint32_t e) const;
    std::uint32_t binary_var(std::uint32_t role_id, std::uint32_t e1, std::uint32_t e2) const;
    std::uint32_t eq_var(std::uint32_t e1, std::uint32_t e2) const; // e1 != e2

    struct encoded {
        enum class tag : std::uint8_t { prop, always_true, always_false };
        tag t = tag::prop;
        sat::lit l = 0;
    };
    // Literal over domain terms -> SAT literal (or a constant for eq(t,t)).
    encoded encode(const literal& l) const;

    // Inverse direction, for witnesses: describe variable v as a ground atom.
    struct ground_atom {
        atom_kind kind;
        std::uint32_t pred; // concept / role id
        std::uint32_t e1, e2;
    };
    ground_atom describe(std::uint32_t var) const;

private:
    grounding_domain dom_;
    std::uint32_t n_concepts_, n_roles_;
    std::uint32_t unary_base_, binary_base_, eq_base_;
};

// Emits the grounding of T over the encoder's domain: every instantiation of
// every universal clause, the ground literals, and equality congruence
// (transitivity per triple plus per-predicate substitution; reflexivity and
// symmetry are built into the encoding).
//
// Why grounding decides T-satisfiability of quantifier-free formulas exactly:
// T is universal and function-free. If T together with a quantifier-free
// formula (free variables read as fresh constants) has any model at all, then
// the substructure induced on the denotations of the domain constants is
// still a model: universal sentences are preserved under substructures, and
// the formula only mentions named terms. That substructure is a quotient of
// the domain constants, which is exactly what an assignment to these
// encoding variables describes. Conversely any satisfying assignment lifts
// to such a quotient structure, and every universal clause holds there
// because each quotient class contains a named constant and all
// instantiations over the constants are present.
void emit_theory_clauses(const universal_theory& t, const atom_encoder& enc,
                         const std::function<void(std::vector<sat::lit>)>& emit);

// Tseitin-encodes f into the solver; the root is asserted, guarded by
// `guard` when given (the formula is then active only under that assumption).
void add_qff_clauses(sat::solver& s, const atom_encoder& enc, const qff& f,
                     std::optional<sat::lit> guard = std::nullopt);

struct sat_verdict {
    bool satisfiable = false;
    // Total assignment of the real (non-auxiliary) encoding variables.
    std::vector<std::pair<atom_encoder::ground_atom, bool>> witness;
};

struct lifted_model {
    finite_interpretation interp;
    std::vector<std::uint32_t> element_class; // domain element index -> interp element id
};

// Quotient of the grounding domain by the witness's equality assignment.
lifted_model lift_witness(const atom_encoder& enc, const sat_verdict& v);

struct sat_options {
    std::vector<std::uint32_t> extra_individuals;
    std::vector<std::uint32_t> extra_variables;
    bool want_witness = false;
    std::uint64_t conflict_budget = 50'000'000;
};

// T-satisfiability of an arbitrary quantifier-free formula, free variables
// read existentially. Exact, never approximate; throws resource_error when
// the budget is exhausted.
sat_verdict sat_qff(const universal_theory& t, const qff& f, const sat_options& opts = {});

struct solved_model {
    finite_interpretation interp;
    std::map<std::uint32_t, std::uint32_t> var_class; // free variable -> element
};

// As sat_qff, but returns the quotient model together with the element each
// free variable of f denotes. nullopt when unsatisfiable.
std::optional<solved_model> solve_model(const universal_theory& t, const qff& f,
                                        const sat_options& opts = {});

// T |= delta -> chi, i.e. sat_qff(T, delta & !chi) is unsatisfiable.
bool entails(const universal_theory& t, const constraint& delta, const clause& chi);
bool entails_qff(const universal_theory& t, const qff& lhs, const qff& rhs);

// One grounding of T reused across many queries on a fixed domain. Queries
// are added under fresh activation literals, so each query sees the shared
// theory clauses plus exactly its own formula.
class sat_session {
public:
    // Predicate counts must cover every concept/role id the queries may use.
    sat_session(const universal_theory& t, grounding_domain d, std::uint32_t n_concepts,
                std::uint32_t n_roles);

    const atom_encoder& encoder() const { return enc_; }
    bool query(const qff& f);                 // satisfiable?
    sat_verdict last_verdict() const;         // witness of the last sat query
    void set_conflict_budget(std::uint64_t b) { solver_.set_conflict_budget(b); }
    void dump_dimacs(std::ostream& os) const { solver_.dump_dimacs(os); }

private:
    atom_encoder enc_;
    sat::solver solver_;
    bool last_sat_ = false;
};

// Equality inlining for satisfiability queries: top-level positive equalities
// x = t are substituted through the formula, shrinking the grounding domain.
// Returns the simplified formula and the variable bindings applied.
std::pair<qff, substitution> inline_equalities(const qff& f);

} // namespace oreach
