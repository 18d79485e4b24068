#pragma once

#include "oreach/vocab.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace oreach {

// Terms are flat: a variable or an individual name. The translated theory is
// function-free, and case-defined updates are compiled away before any
// reasoning runs, so no compound terms ever arise.
struct term {
    bool is_variable = false;
    std::uint32_t id = 0;

    static term var(symbol s);
    static term ind(symbol s);
    symbol sym() const {
        return symbol{is_variable ? symbol_kind::variable : symbol_kind::individual, id};
    }

    friend bool operator==(term a, term b) = default;
    friend auto operator<=>(term a, term b) = default;
};

enum class atom_kind : std::uint8_t { concept_app, role_app, equality };

// Equality atoms are stored with their arguments in term order, so syntactic
// equality of atoms is insensitive to the side a term was written on.
struct atom {
    atom_kind kind = atom_kind::equality;
    std::uint32_t pred = 0; // concept or role id; unused for equality
    term lhs, rhs;          // concept_app uses lhs only

    static atom concept_app(symbol c, term t);
    static atom role_app(symbol r, term t1, term t2);
    static atom equality(term t1, term t2);

    friend bool operator==(const atom& a, const atom& b) = default;
    friend auto operator<=>(const atom& a, const atom& b) = default;
};

struct literal {
    atom at;
    bool positive = true;

    literal negated() const { return literal{at, !positive}; }
    friend bool operator==(const literal& a, const literal& b) = default;
    friend auto operator<=>(const literal& a, const literal& b) = default;
};

// Set of concept / role / individual ids occurring in a syntax object.
struct signature {
    std::set<std::uint32_t> concepts;
    std::set<std::uint32_t> roles;
    std::set<std::uint32_t> individuals;

    void merge(const signature& other);
    friend bool operator==(const signature&, const signature&) = default;
};

class qff;

// Conjunction of literals, kept in insertion order with duplicates removed.
// A constraint may contain a complementary pair; it is then just unsatisfiable.
class constraint {
public:
    constraint() = default;
    explicit constraint(std::vector<literal> lits);

    void push(const literal& l);
    const std::vector<literal>& literals() const { return lits_; }
    bool empty() const { return lits_.empty(); }
    std::size_t size() const { return lits_.size(); }

    bool has_complementary_pair() const;
    // True when `other`'s literals are a subset of ours (so we imply it).
    bool subsumed_by(const constraint& other) const;

    std::set<std::uint32_t> free_vars() const;
    qff to_qff() const;

    friend bool operator==(const constraint&, const constraint&) = default;

private:
    std::vector<literal> lits_;
};

// Disjunction of literals, sorted with duplicates removed.
class clause {
public:
    clause() = default;
    explicit clause(std::vector<literal> lits);

    const std::vector<literal>& literals() const { return lits_; }
    bool empty() const { return lits_.empty(); }
    std::size_t size() const { return lits_.size(); }
    bool is_tautological() const;
    qff to_qff() const;

    friend bool operator==(const clause&, const clause&) = default;
    friend auto operator<=>(const clause&, const clause&) = default;

private:
    std::vector<literal> lits_;
};

// Quantifier-free formula: a Boolean tree over atoms with shared immutable
// nodes. State formulas, safety formulas, guards and frames all live here.
class qff {
public:
    enum class node_kind : std::uint8_t { top, bottom, atom_node, negation, conjunction, disjunction };

    qff(); // defaults to `true`

    static qff top();
    static qff bottom();
    static qff of(const atom& a);
    static qff of(const literal& l);
    static qff neg(const qff& f);
    static qff all_of(std::vector<qff> fs); // empty -> top
    static qff any_of(std::vector<qff> fs); // empty -> bottom

    node_kind kind() const { return node_->k; }
    const atom& atom_of() const { return node_->at; }
    const std::vector<qff>& children() const { return node_->kids; }

    bool is_true() const { return kind() == node_kind::top; }
    bool is_false() const { return kind() == node_kind::bottom; }

    // Structural equality (cheap via shared nodes; never semantic).
    bool same_as(const qff& other) const;

private:
    struct node {
        node_kind k;
        atom at;
        std::vector<qff> kids;
    };
    explicit qff(std::shared_ptr<const node> n) : node_(std::move(n)) {}
    std::shared_ptr<const node> node_;
};

using substitution = std::map<std::uint32_t, term>; // variable id -> term

term substitute(term t, const substitution& sigma);
atom substitute(const atom& a, const substitution& sigma);
literal substitute(const literal& l, const substitution& sigma);
constraint substitute(const constraint& c, const substitution& sigma);
qff substitute(const qff& f, const substitution& sigma);

std::set<std::uint32_t> free_vars(const qff& f);
std::set<std::uint32_t> free_vars(const atom& a);

signature sig_of(const term& t);
signature sig_of(const atom& a);
signature sig_of(const literal& l);
signature sig_of(const constraint& c);
signature sig_of(const qff& f);

// Disjunctive normal form. The result's disjunction is propositionally
// equivalent to `f`; cubes with complementary literals are pruned and
// duplicate cubes removed. Throws resource_error past `literal_budget`.
std::vector<constraint> to_dnf(const qff& f, std::size_t literal_budget = 1000000);

// Propositional evaluation with atoms treated as opaque variables.
bool eval_propositional(const qff& f, const std::function<bool(const atom&)>& val);

// Collect every distinct atom of `f`, in first-occurrence order.
std::vector<atom> atoms_of(const qff& f);

std::string to_string(const term& t, const vocab& v);
std::string to_string(const atom& a, const vocab& v);
std::string to_string(const literal& l, const vocab& v);
std::string to_string(const constraint& c, const vocab& v);
std::string to_string(const qff& f, const vocab& v);

} // namespace oreach
