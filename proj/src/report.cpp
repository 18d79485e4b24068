#include "oreach/report.hpp"

#include <json.hpp>

namespace oreach {

using ordered_json = nlohmann::ordered_json;

std::string render_report(const verdict& vd, const artifact_system& s, const vocab& v) {
    ordered_json j;
    j["status"] = vd.status == verdict_status::safe ? "safe" : "unsafe";
    j["iterations"] = vd.iterations;
    j["trace"] = ordered_json::array();
    if (vd.trace) {
        for (std::size_t i = 0; i < vd.trace->transition_names.size(); ++i) {
            ordered_json step;
            step["step"] = i;
            step["transition"] = vd.trace->transition_names[i];
            j["trace"].push_back(std::move(step));
        }
        if (vd.trace->witness) {
            const finite_interpretation& m = *vd.trace->witness;
            auto label = [](std::uint32_t e) { return "e" + std::to_string(e); };
            ordered_json w;
            w["domain"] = ordered_json::array();
            for (auto e : m.domain)
                w["domain"].push_back(label(e));
            w["concepts"] = ordered_json::object();
            for (const auto& [cid, ext] : m.concept_ext) {
                if (ext.empty())
                    continue;
                ordered_json elems = ordered_json::array();
                for (auto e : ext)
                    elems.push_back(label(e));
                w["concepts"][v.name(symbol{symbol_kind::concept_name, cid})] = std::move(elems);
            }
            w["roles"] = ordered_json::object();
            for (const auto& [rid, ext] : m.role_ext) {
                if (ext.empty())
                    continue;
                ordered_json pairs = ordered_json::array();
                for (auto [a, b] : ext)
                    pairs.push_back(ordered_json::array({label(a), label(b)}));
                w["roles"][v.name(symbol{symbol_kind::role_name, rid})] = std::move(pairs);
            }
            w["constants"] = ordered_json::object();
            for (const auto& [ind, e] : m.constant_map)
                w["constants"][v.name(symbol{symbol_kind::individual, ind})] = label(e);
            w["assignments"] = ordered_json::array();
            for (std::size_t h = 0; h < vd.trace->step_values.size(); ++h) {
                ordered_json a;
                a["step"] = h;
                a["values"] = ordered_json::object();
                for (std::size_t i = 0; i < s.vars.size(); ++i)
                    a["values"][v.name(symbol{symbol_kind::variable, s.vars[i]})] =
                        label(vd.trace->step_values[h][i]);
                if (h < vd.trace->param_values.size() &&
                    !vd.trace->param_values[h].empty()) {
                    a["params"] = ordered_json::object();
                    const transition& tau = s.transitions[vd.trace->transition_indices[h]];
                    for (std::size_t k = 0; k < tau.params.size(); ++k)
                        a["params"][v.name(symbol{symbol_kind::variable, tau.params[k]})] =
                            label(vd.trace->param_values[h][k]);
                }
                w["assignments"].push_back(std::move(a));
            }
            j["witness"] = std::move(w);
        }
    }
    return j.dump() + "\n";
}

std::string render_inconclusive(std::uint32_t iterations) {
    ordered_json j;
    j["status"] = "inconclusive";
    j["iterations"] = iterations;
    j["trace"] = ordered_json::array();
    return j.dump() + "\n";
}

} // namespace oreach
