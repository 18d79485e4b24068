#pragma once

#include "oreach/ground_sat.hpp"
#include "oreach/logic.hpp"
#include "oreach/ontology.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace oreach {

// kappa_1(x), ..., kappa_n(x): literals the theory proves exhaustive and
// pairwise disjoint. The guard alphabet of case-defined functions.
struct o_partition {
    std::vector<literal> cases;

    friend bool operator==(const o_partition&, const o_partition&) = default;
};

// F based on a partition and branch terms, |branch_terms| == |partition.cases|.
// The only place function symbols survive; eliminated before any reasoning.
struct case_function {
    std::string name;
    o_partition partition;
    std::vector<term> branch_terms;

    friend bool operator==(const case_function&, const case_function&) = default;
};

struct update {
    bool is_case = false;
    term plain;      // when !is_case
    case_function cf; // when is_case

    static update identity(std::uint32_t var_id);
    static update to(term t);
    static update cases(case_function f);

    friend bool operator==(const update&, const update&) = default;
};

// Guarded transition with one update per artifact variable (identity counts).
struct transition {
    std::string name;
    std::vector<std::uint32_t> params; // existential parameter variable ids
    constraint guard;                  // conjunction of signature literals
    std::vector<update> updates;       // aligned with the artifact variables

    bool case_free() const;

    friend bool operator==(const transition&, const transition&) = default;
};

struct artifact_system {
    ontology onto;
    std::vector<std::uint32_t> vars;                        // artifact variable ids
    std::vector<std::pair<std::uint32_t, std::uint32_t>> init; // (var id, individual id)
    std::vector<transition> transitions;
    std::vector<std::uint32_t> extra_constants; // declared in the system file

    qff initial_formula() const; // conjunction of var = individual
    bool case_free() const;
    // Individuals in scope: ontology individuals, init values, declared extras.
    std::vector<std::uint32_t> scope_individuals() const;
    std::size_t syntactic_size() const; // node count, for the quadratic bound
};

// Safety formula: quantifier-free over the artifact variables.
struct safety_formula {
    qff formula;
};

struct partition_check {
    bool valid = false;
    std::vector<std::string> diagnostics;
};

// Cover check (conjunction of all negations unsatisfiable) plus all pairwise
// disjointness checks, both against T.
partition_check validate_partition(const universal_theory& t, const o_partition& p);

// Expands every case-defined update into one transition per branch choice,
// guarded by the chosen partition literals. The result is case-free and
// equivalent on every model of T; size is quadratic in the input.
artifact_system eliminate_case_functions(const artifact_system& s, const universal_theory& t);

struct preimage_result {
    std::vector<constraint> disjuncts;  // DNF of guard & phi[x := update terms]
    std::vector<std::uint32_t> drop;    // parameter variables still to eliminate
};

// Pre(tau, phi) with the functional updates inlined by substitution, so the
// primed variables never materialise; only the parameters remain to drop.
preimage_result preimage(const transition& tau, const std::vector<std::uint32_t>& vars,
                         const qff& phi);

struct unsafe_formula {
    qff formula;
    std::vector<std::vector<std::uint32_t>> step_vars; // step h -> copies of vars
    std::vector<std::vector<std::uint32_t>> step_params; // step h -> param copies
};

// iota(x0) & tau_{j0}(x0,x1) & ... & nu(xk), with fresh variable tuples per
// step and transition parameters Skolemized to fresh free variables.
unsafe_formula build_unsafe_formula(const artifact_system& s, const qff& nu,
                                    const std::vector<std::uint32_t>& transition_indices,
                                    vocab& v);

} // namespace oreach
