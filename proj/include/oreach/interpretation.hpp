#pragma once

#include "oreach/logic.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace oreach {

// Explicit finite interpretation. Elements are global ids so that shared
// substructures and union constructions can be expressed directly.
struct finite_interpretation {
    std::vector<std::uint32_t> domain; // sorted element ids
    std::map<std::uint32_t, std::set<std::uint32_t>> concept_ext;
    std::map<std::uint32_t, std::set<std::pair<std::uint32_t, std::uint32_t>>> role_ext;
    std::map<std::uint32_t, std::uint32_t> constant_map; // individual id -> element id

    bool has_element(std::uint32_t e) const;
    bool in_concept(std::uint32_t concept_id, std::uint32_t e) const;
    bool in_role(std::uint32_t role_id, std::uint32_t e1, std::uint32_t e2) const;
    void add_element(std::uint32_t e);
    void add_concept(std::uint32_t concept_id, std::uint32_t e);
    void add_role(std::uint32_t role_id, std::uint32_t e1, std::uint32_t e2);

    // Element denoted by a term under an explicit variable assignment.
    std::uint32_t eval_term(const term& t,
                            const std::map<std::uint32_t, std::uint32_t>& var_assignment) const;
    bool eval(const atom& a, const std::map<std::uint32_t, std::uint32_t>& var_assignment) const;
    bool eval(const literal& l, const std::map<std::uint32_t, std::uint32_t>& var_assignment) const;
    bool eval(const qff& f, const std::map<std::uint32_t, std::uint32_t>& var_assignment) const;

    friend bool operator==(const finite_interpretation&, const finite_interpretation&) = default;
};

} // namespace oreach
