#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace oreach {

// Raised when a computation exceeds an explicit resource budget (DNF node
// count, SAT conflicts, iteration caps). Callers distinguish this from a
// verdict: budget exhaustion is never reported as sat/unsat/safe/unsafe.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct vocab_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class symbol_kind : std::uint8_t {
    concept_name, // unary predicate
    role_name,    // binary predicate
    individual,
    variable,
};

std::string_view kind_name(symbol_kind k);

struct symbol {
    symbol_kind kind;
    std::uint32_t id;

    friend bool operator==(symbol a, symbol b) = default;
    friend auto operator<=>(symbol a, symbol b) = default;
};

// Name table. Names are global across kinds: one name denotes at most one
// symbol, so the concept/role/individual/variable namespaces stay pairwise
// disjoint. Interning the same name with a different kind is an error.
class vocab {
public:
    symbol intern(std::string_view name, symbol_kind kind);
    std::optional<symbol> lookup(std::string_view name) const;
    bool contains(std::string_view name) const { return lookup(name).has_value(); }

    const std::string& name(symbol s) const;
    std::uint32_t count(symbol_kind kind) const;

    // Derives an unused variable name from `base` ("x" -> "x@1", "x@2", ...).
    symbol fresh_variable(std::string_view base);

    std::vector<symbol> all(symbol_kind kind) const;

private:
    std::vector<std::string>& pool(symbol_kind kind);
    const std::vector<std::string>& pool(symbol_kind kind) const;

    std::unordered_map<std::string, symbol> by_name_;
    std::vector<std::string> concepts_, roles_, individuals_, variables_;
};

} // namespace oreach
