#include "oreach/interpretation.hpp"

#include <algorithm>
#include <stdexcept>

namespace oreach {

bool finite_interpretation::has_element(std::uint32_t e) const {
    return std::binary_search(domain.begin(), domain.end(), e);
}

bool finite_interpretation::in_concept(std::uint32_t concept_id, std::uint32_t e) const {
    auto it = concept_ext.find(concept_id);
    return it != concept_ext.end() && it->second.count(e) > 0;
}

bool finite_interpretation::in_role(std::uint32_t role_id, std::uint32_t e1,
                                    std::uint32_t e2) const {
    auto it = role_ext.find(role_id);
    return it != role_ext.end() && it->second.count({e1, e2}) > 0;
}

void finite_interpretation::add_element(std::uint32_t e) {
    auto it = std::lower_bound(domain.begin(), domain.end(), e);
    if (it == domain.end() || *it != e)
        domain.insert(it, e);
}

void finite_interpretation::add_concept(std::uint32_t concept_id, std::uint32_t e) {
    concept_ext[concept_id].insert(e);
}

void finite_interpretation::add_role(std::uint32_t role_id, std::uint32_t e1, std::uint32_t e2) {
    role_ext[role_id].insert({e1, e2});
}

std::uint32_t finite_interpretation::eval_term(
    const term& t, const std::map<std::uint32_t, std::uint32_t>& var_assignment) const {
    if (t.is_variable) {
        auto it = var_assignment.find(t.id);
        if (it == var_assignment.end())
            throw std::out_of_range("unassigned variable in evaluation");
        return it->second;
    }
    auto it = constant_map.find(t.id);
    if (it == constant_map.end())
        throw std::out_of_range("individual not interpreted");
    return it->second;
}

bool finite_interpretation::eval(const atom& a,
                                 const std::map<std::uint32_t, std::uint32_t>& va) const {
    switch (a.kind) {
    case atom_kind::concept_app: return in_concept(a.pred, eval_term(a.lhs, va));
    case atom_kind::role_app: return in_role(a.pred, eval_term(a.lhs, va), eval_term(a.rhs, va));
    case atom_kind::equality: return eval_term(a.lhs, va) == eval_term(a.rhs, va);
    }
    return false;
}

bool finite_interpretation::eval(const literal& l,
                                 const std::map<std::uint32_t, std::uint32_t>& va) const {
    return eval(l.at, va) == l.positive;
}

bool finite_interpretation::eval(const qff& f,
                                 const std::map<std::uint32_t, std::uint32_t>& va) const {
    switch (f.kind()) {
    case qff::node_kind::top: return true;
    case qff::node_kind::bottom: return false;
    case qff::node_kind::atom_node: return eval(f.atom_of(), va);
    case qff::node_kind::negation: return !eval(f.children()[0], va);
    case qff::node_kind::conjunction:
        for (const auto& k : f.children())
            if (!eval(k, va))
                return false;
        return true;
    case qff::node_kind::disjunction:
        for (const auto& k : f.children())
            if (eval(k, va))
                return true;
        return false;
    }
    return false;
}

} // namespace oreach
