#pragma once

#include "oreach/ground_sat.hpp"
#include "oreach/logic.hpp"
#include "oreach/ontology.hpp"

#include <cstdint>
#include <set>
#include <vector>

namespace oreach {

// The vocabulary a cover is expressed over: the variables to keep plus every
// individual constant in scope. The atom universe is all concept, role and
// equality atoms over these terms.
struct target_vocabulary {
    std::vector<std::uint32_t> kept_vars;  // sorted variable ids
    std::vector<std::uint32_t> constants;  // sorted individual ids

    static target_vocabulary make(const universal_theory& t, const constraint& delta,
                                  const std::set<std::uint32_t>& drop,
                                  const std::vector<std::uint32_t>& scope_constants);
};

struct cover_result {
    qff formula;                          // over the target vocabulary
    std::vector<std::uint32_t> eliminated;
};

struct cover_options {
    std::size_t max_patterns = 65536;
    std::size_t max_dp_clauses = 200000;
    bool simplify = true;
    std::uint64_t sat_conflict_budget = 50'000'000;
};

// Quantifier elimination in the model completion: the strongest quantifier-
// free consequence of delta over the target vocabulary, the dropped variables
// read existentially. The result psi satisfies
//   (a) T |= delta -> psi, and
//   (b) T |= delta -> chi implies T |= psi -> chi for every clause chi over
//       the vocabulary,
// which pins psi down to T-equivalence.
//
// Realisation: split on how each dropped variable collides with the named
// terms (equal to a kept term, or a fresh element, with fresh classes shared
// or distinct). Collision branches reduce to substitution instances; fresh
// branches ground T over the kept terms plus the fresh witnesses and project
// the clause set onto the vocabulary atoms by resolution-based variable
// elimination, which computes the propositional existential projection
// exactly. Each branch is exact for its collision case and the disjunction
// over all cases is the cover; the strength property test checks contract (b)
// independently.
cover_result eliminate(const universal_theory& t, const constraint& delta,
                       const std::set<std::uint32_t>& drop, const target_vocabulary& scope,
                       const cover_options& opts = {});

// Frames are disjunctions of constraints; elimination distributes over the
// disjuncts.
qff eliminate_qff(const universal_theory& t, const qff& f, const std::set<std::uint32_t>& drop,
                  const std::vector<std::uint32_t>& scope_constants,
                  const cover_options& opts = {});

} // namespace oreach
