#pragma once

#include "oreach/interpretation.hpp"
#include "oreach/logic.hpp"
#include "oreach/ontology.hpp"
#include "oreach/sas.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace oreach {

// Exact truth of every universal clause and ground literal in I.
bool check_model(const finite_interpretation& i, const universal_theory& t);

// Direct description-logic evaluation of the ontology (concept and role
// expressions interpreted set-theoretically), independent of the translation.
bool check_model_dl(const finite_interpretation& i, const ontology& o);

// The symbols an enumeration ranges over.
struct enumeration_scope {
    std::vector<std::uint32_t> concepts;
    std::vector<std::uint32_t> roles;
    std::vector<std::uint32_t> individuals;

    static enumeration_scope of(const universal_theory& t);
    static enumeration_scope of(const ontology& o);
};

// All interpretations with domain {0..n-1}, every constant map, every
// extension combination. Deterministic order. `visit` returning false stops
// the stream; the return value says whether enumeration ran to completion.
// Throws resource_error when the total count exceeds the budget.
bool enumerate_interpretations(const enumeration_scope& scope, std::uint32_t n,
                               const std::function<bool(const finite_interpretation&)>& visit,
                               std::uint64_t budget = 200'000'000);

// As above, filtered by check_model.
bool enumerate_models(const universal_theory& t, const enumeration_scope& scope, std::uint32_t n,
                      const std::function<bool(const finite_interpretation&)>& visit,
                      std::uint64_t budget = 200'000'000);

// Bounded satisfiability decided by brute force, the independent mirror of
// the grounding route: enumerate quotients of the named constants (equality
// as a surjective map onto classes), concept extensions over the classes,
// and per-pair role feasibility. Free variables of `f` read as constants.
bool satisfiable_by_enumeration(const universal_theory& t, const qff& f,
                                std::uint64_t budget = 400'000'000);

struct morphism {
    const finite_interpretation* source = nullptr;
    const finite_interpretation* target = nullptr;
    std::map<std::uint32_t, std::uint32_t> element_map;
};

bool is_homomorphism(const morphism& m, const signature& sigma);
// Injective and atom-preserving in both directions.
bool is_embedding(const morphism& m, const signature& sigma);
// The identity inclusion of I0 into I is an embedding.
bool is_substructure(const finite_interpretation& i0, const finite_interpretation& i,
                     const signature& sigma);

// Union amalgam: domain and extensions are unions, constants interpreted as
// in I1. Requires I0 to be a substructure of both and the domains to
// intersect exactly in I0's.
finite_interpretation amalgamate(const finite_interpretation& i1, const finite_interpretation& i2,
                                 const finite_interpretation& i0, const signature& sigma);

// One concrete step of the system inside a model: all (transition index,
// successor assignment) pairs reachable from `state`, parameters ranging over
// the domain. Case-defined updates are evaluated by their semantics, so this
// works on systems before and after case elimination.
std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>>
step_successors(const finite_interpretation& i, const artifact_system& s,
                const std::vector<std::uint32_t>& state);

// Seeded random models of T of at most `size_bound` elements interpreting all
// of `constants`: random sparse extensions repaired by forward closure under
// the clause shapes, then verified by check_model.
std::vector<finite_interpretation> sample_models(const universal_theory& t,
                                                 const std::vector<std::uint32_t>& constants,
                                                 std::uint32_t size_bound, std::uint32_t count,
                                                 std::uint64_t seed);

struct forward_violation {
    std::vector<std::uint32_t> transitions;          // indices into s.transitions
    finite_interpretation model;
    std::vector<std::vector<std::uint32_t>> states;  // assignments along the run
};

struct forward_options {
    std::uint32_t model_samples = 300;
    std::uint64_t seed = 1;
    std::vector<finite_interpretation> seed_models; // tried first, e.g. engine witnesses
    std::uint64_t state_budget = 4'000'000;
};

struct forward_result {
    std::optional<forward_violation> violation;
    std::uint32_t models_explored = 0;
};

// Explores, per candidate model of T with at most `domain_bound` elements,
// the reachable assignment graph of s to `depth`, reporting the first state
// satisfying nu. A violation replays concretely; the no-violation answer is
// sound only within the stated bounds and searched models.
forward_result bounded_forward_verify(const artifact_system& s, const universal_theory& t,
                                      const qff& nu, std::uint32_t domain_bound,
                                      std::uint32_t depth, const forward_options& opts = {});

} // namespace oreach
