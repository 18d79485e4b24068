#pragma once

#include "oreach/cover.hpp"
#include "oreach/ground_sat.hpp"
#include "oreach/ontology.hpp"
#include "oreach/sas.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace oreach {

// One disjunct of a frame, with the provenance needed to rebuild a trace:
// which transition's preimage produced it and from which disjunct.
struct frame_disjunct {
    constraint cube;
    std::int64_t parent = -1;     // index into the disjunct arena; -1 for the safety formula
    std::uint32_t via = 0;        // transition index (meaningful when parent >= 0)
    std::uint32_t frame_index = 0;
};

struct unsafe_trace {
    std::vector<std::uint32_t> transition_indices; // forward order, j_0 ... j_{k-1}
    std::vector<std::string> transition_names;
    unsafe_formula star;                           // the verified reachability formula
    // Concrete witness lifted from the satisfiability check of `star`.
    std::optional<finite_interpretation> witness;
    std::vector<std::vector<std::uint32_t>> step_values;  // step h -> element per variable
    std::vector<std::vector<std::uint32_t>> param_values; // step h -> element per parameter
};

enum class verdict_status : std::uint8_t { safe, unsafe };

struct breach_stats {
    std::uint32_t iterations = 0;
    std::vector<std::size_t> frame_sizes;
    std::uint32_t invariant_checks_passed = 0;
    bool stability_checked = false;
    bool trace_reverified = false;
};

struct verdict {
    verdict_status status = verdict_status::safe;
    std::uint32_t iterations = 0;
    std::optional<unsafe_trace> trace;
    breach_stats stats;
};

struct breach_options {
    std::uint32_t max_iterations = 10000;
    bool check_invariants = true;
    bool extract_witness = true;
    cover_options cover;
    std::uint64_t sat_conflict_budget = 50'000'000;
    std::uint32_t jobs = 1;
    std::function<void(const std::string&)> log; // one line per iteration when set
};

// Backward reachability: phi starts at the safety formula and is regressed
// through transition preimages with quantifier elimination, accumulating the
// explored region in B, until phi & !B is unsatisfiable (safe) or iota & phi
// is satisfiable (unsafe, with a re-verified trace). Requires a case-free
// system; throws resource_error (never a wrong verdict) when a limit is hit.
verdict breach(const artifact_system& s, const universal_theory& t, const qff& nu, vocab& v,
               const breach_options& opts = {});

// Walks provenance links back from the disjunct that met the initial state,
// re-verifies the resulting reachability formula, and extracts the witness.
// Aborts (logic_error) if verification fails; no unverified trace escapes.
unsafe_trace reconstruct_trace(const artifact_system& s, const universal_theory& t, const qff& nu,
                               vocab& v, const std::vector<frame_disjunct>& arena,
                               std::size_t hit_index, bool want_witness);

} // namespace oreach
