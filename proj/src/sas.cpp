#include "oreach/sas.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace oreach {

update update::identity(std::uint32_t var_id) {
    update u;
    u.plain = term{true, var_id};
    return u;
}

update update::to(term t) {
    update u;
    u.plain = t;
    return u;
}

update update::cases(case_function f) {
    update u;
    u.is_case = true;
    u.cf = std::move(f);
    return u;
}

bool transition::case_free() const {
    return std::none_of(updates.begin(), updates.end(), [](const update& u) { return u.is_case; });
}

qff artifact_system::initial_formula() const {
    std::vector<qff> eqs;
    eqs.reserve(init.size());
    for (auto [var_id, ind_id] : init)
        eqs.push_back(qff::of(atom::equality(term{true, var_id}, term{false, ind_id})));
    return qff::all_of(std::move(eqs));
}

bool artifact_system::case_free() const {
    return std::all_of(transitions.begin(), transitions.end(),
                       [](const transition& t) { return t.case_free(); });
}

std::vector<std::uint32_t> artifact_system::scope_individuals() const {
    std::set<std::uint32_t> out = onto.sig().individuals;
    for (auto [var_id, ind_id] : init) {
        (void)var_id;
        out.insert(ind_id);
    }
    out.insert(extra_constants.begin(), extra_constants.end());
    return {out.begin(), out.end()};
}

std::size_t artifact_system::syntactic_size() const {
    std::size_t n = vars.size() + init.size();
    for (const auto& t : transitions) {
        n += 1 + t.params.size() + t.guard.size();
        for (const auto& u : t.updates) {
            if (!u.is_case) {
                n += 1;
            } else {
                n += u.cf.partition.cases.size() + u.cf.branch_terms.size();
            }
        }
    }
    return n;
}

partition_check validate_partition(const universal_theory& t, const o_partition& p) {
    partition_check out;
    out.valid = true;
    if (p.cases.empty()) {
        out.valid = false;
        out.diagnostics.push_back("partition has no cases");
        return out;
    }
    // Cover: T |= forall x. k1 | ... | kn, i.e. the conjunction of all
    // negations is T-unsatisfiable.
    constraint all_negated;
    for (const auto& k : p.cases)
        all_negated.push(k.negated());
    if (sat_qff(t, all_negated.to_qff()).satisfiable) {
        out.valid = false;
        out.diagnostics.push_back("cases do not cover: all-negated conjunction is satisfiable");
    }
    for (std::size_t i = 0; i < p.cases.size(); ++i)
        for (std::size_t j = i + 1; j < p.cases.size(); ++j) {
            constraint both;
            both.push(p.cases[i]);
            both.push(p.cases[j]);
            if (sat_qff(t, both.to_qff()).satisfiable) {
                out.valid = false;
                out.diagnostics.push_back("cases " + std::to_string(i) + " and " +
                                          std::to_string(j) + " overlap");
            }
        }
    return out;
}

artifact_system eliminate_case_functions(const artifact_system& s, const universal_theory& t) {
    artifact_system out = s;
    out.transitions.clear();
    for (const auto& tau : s.transitions) {
        std::vector<std::size_t> case_positions;
        for (std::size_t i = 0; i < tau.updates.size(); ++i)
            if (tau.updates[i].is_case)
                case_positions.push_back(i);
        if (case_positions.empty()) {
            out.transitions.push_back(tau);
            continue;
        }
        for (std::size_t pos : case_positions) {
            const case_function& f = tau.updates[pos].cf;
            if (f.branch_terms.size() != f.partition.cases.size())
                throw std::invalid_argument("case function branch/partition size mismatch");
            partition_check chk = validate_partition(t, f.partition);
            if (!chk.valid)
                throw std::invalid_argument("invalid partition in case function '" + f.name + "': " +
                                            (chk.diagnostics.empty() ? "" : chk.diagnostics[0]));
        }
        // Product of branch choices, one new transition per combination.
        std::vector<std::size_t> choice(case_positions.size(), 0);
        for (;;) {
            transition nt;
            nt.params = tau.params;
            nt.guard = tau.guard;
            nt.updates = tau.updates;
            std::string suffix;
            for (std::size_t c = 0; c < case_positions.size(); ++c) {
                const case_function& f = tau.updates[case_positions[c]].cf;
                nt.guard.push(f.partition.cases[choice[c]]);
                nt.updates[case_positions[c]] = update::to(f.branch_terms[choice[c]]);
                suffix += "." + std::to_string(choice[c] + 1);
            }
            nt.name = tau.name + suffix;
            out.transitions.push_back(std::move(nt));
            // Next combination.
            std::size_t c = 0;
            for (; c < case_positions.size(); ++c) {
                const case_function& f = tau.updates[case_positions[c]].cf;
                if (++choice[c] < f.partition.cases.size())
                    break;
                choice[c] = 0;
            }
            if (c == case_positions.size())
                break;
        }
    }
    return out;
}

preimage_result preimage(const transition& tau, const std::vector<std::uint32_t>& vars,
                         const qff& phi) {
    if (!tau.case_free())
        throw std::invalid_argument("preimage requires a case-free transition");
    assert(tau.updates.size() == vars.size());
    substitution sigma;
    for (std::size_t i = 0; i < vars.size(); ++i)
        sigma[vars[i]] = tau.updates[i].plain;
    qff shifted = substitute(phi, sigma);
    qff full = qff::all_of({tau.guard.to_qff(), shifted});
    preimage_result out;
    out.disjuncts = to_dnf(full);
    out.drop = tau.params;
    return out;
}

unsafe_formula build_unsafe_formula(const artifact_system& s, const qff& nu,
                                    const std::vector<std::uint32_t>& transition_indices,
                                    vocab& v) {
    const std::size_t k = transition_indices.size();
    unsafe_formula out;
    out.step_vars.resize(k + 1);
    for (std::size_t h = 0; h <= k; ++h) {
        for (auto var_id : s.vars) {
            symbol fresh = v.fresh_variable(v.name(symbol{symbol_kind::variable, var_id}) + "#" +
                                            std::to_string(h));
            out.step_vars[h].push_back(fresh.id);
        }
    }

    std::vector<qff> blocks;
    // iota over the step-0 copies.
    {
        substitution sigma;
        for (std::size_t i = 0; i < s.vars.size(); ++i)
            sigma[s.vars[i]] = term{true, out.step_vars[0][i]};
        blocks.push_back(substitute(s.initial_formula(), sigma));
    }
    out.step_params.resize(k);
    for (std::size_t h = 0; h < k; ++h) {
        std::uint32_t j = transition_indices[h];
        if (j >= s.transitions.size())
            throw std::invalid_argument("transition index out of range");
        const transition& tau = s.transitions[j];
        if (!tau.case_free())
            throw std::invalid_argument("build_unsafe_formula requires case-free transitions");
        substitution sigma;
        for (std::size_t i = 0; i < s.vars.size(); ++i)
            sigma[s.vars[i]] = term{true, out.step_vars[h][i]};
        for (auto p : tau.params) {
            symbol fresh = v.fresh_variable(v.name(symbol{symbol_kind::variable, p}) + "#" +
                                            std::to_string(h));
            out.step_params[h].push_back(fresh.id);
            sigma[p] = term{true, fresh.id};
        }
        std::vector<qff> parts{substitute(tau.guard.to_qff(), sigma)};
        for (std::size_t i = 0; i < s.vars.size(); ++i) {
            term updated = substitute(tau.updates[i].plain, sigma);
            parts.push_back(
                qff::of(atom::equality(term{true, out.step_vars[h + 1][i]}, updated)));
        }
        blocks.push_back(qff::all_of(std::move(parts)));
    }
    // nu over the step-k copies.
    {
        substitution sigma;
        for (std::size_t i = 0; i < s.vars.size(); ++i)
            sigma[s.vars[i]] = term{true, out.step_vars[k][i]};
        blocks.push_back(substitute(nu, sigma));
    }
    out.formula = qff::all_of(std::move(blocks));
    return out;
}

} // namespace oreach
