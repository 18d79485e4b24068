#include "oreach/vocab.hpp"

namespace oreach {

std::string_view kind_name(symbol_kind k) {
    switch (k) {
    case symbol_kind::concept_name: return "concept";
    case symbol_kind::role_name: return "role";
    case symbol_kind::individual: return "individual";
    case symbol_kind::variable: return "variable";
    }
    return "?";
}

std::vector<std::string>& vocab::pool(symbol_kind kind) {
    switch (kind) {
    case symbol_kind::concept_name: return concepts_;
    case symbol_kind::role_name: return roles_;
    case symbol_kind::individual: return individuals_;
    case symbol_kind::variable: return variables_;
    }
    throw vocab_error("bad symbol kind");
}

const std::vector<std::string>& vocab::pool(symbol_kind kind) const {
    return const_cast<vocab*>(this)->pool(kind);
}

symbol vocab::intern(std::string_view name, symbol_kind kind) {
    if (name.empty())
        throw vocab_error("symbol names must be nonempty");
    auto it = by_name_.find(std::string(name));
    if (it != by_name_.end()) {
        if (it->second.kind != kind)
            throw vocab_error("name '" + std::string(name) + "' already used as " +
                              std::string(kind_name(it->second.kind)) + ", cannot reuse as " +
                              std::string(kind_name(kind)));
        return it->second;
    }
    auto& p = pool(kind);
    symbol s{kind, static_cast<std::uint32_t>(p.size())};
    p.emplace_back(name);
    by_name_.emplace(std::string(name), s);
    return s;
}

std::optional<symbol> vocab::lookup(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end())
        return std::nullopt;
    return it->second;
}

const std::string& vocab::name(symbol s) const {
    const auto& p = pool(s.kind);
    if (s.id >= p.size())
        throw vocab_error("symbol id out of range");
    return p[s.id];
}

std::uint32_t vocab::count(symbol_kind kind) const {
    return static_cast<std::uint32_t>(pool(kind).size());
}

symbol vocab::fresh_variable(std::string_view base) {
    std::string candidate(base);
    for (int i = 1; contains(candidate); ++i)
        candidate = std::string(base) + "@" + std::to_string(i);
    return intern(candidate, symbol_kind::variable);
}

std::vector<symbol> vocab::all(symbol_kind kind) const {
    std::vector<symbol> out;
    const auto& p = pool(kind);
    out.reserve(p.size());
    for (std::uint32_t i = 0; i < p.size(); ++i)
        out.push_back(symbol{kind, i});
    return out;
}

} // namespace oreach
