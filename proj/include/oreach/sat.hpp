#pragma once

#include "oreach/vocab.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace oreach {
namespace sat {

// Literal encoding: variable v (0-based) positive -> 2v, negative -> 2v+1.
using lit = std::uint32_t;

inline lit mk_lit(std::uint32_t var, bool positive) { return 2 * var + (positive ? 0 : 1); }
inline std::uint32_t var_of(lit l) { return l >> 1; }
inline bool sign_of(lit l) { return (l & 1) == 0; } // true = positive
inline lit neg(lit l) { return l ^ 1; }

enum class status : std::uint8_t { satisfiable, unsatisfiable };

// Conflict-driven clause learning solver: two watched literals, 1UIP
// learning, activity-based branching with phase saving, geometric restarts.
// Clauses may be added between solve() calls; learned clauses are kept.
// Branching order is a deterministic function of clause insertion order, so
// repeated runs produce identical models.
class solver {
public:
    std::uint32_t new_var();
    std::uint32_t num_vars() const { return static_cast<std::uint32_t>(assign_.size()); }

    // Returns false if the clause is already falsified at level 0 (the solver
    // is then permanently unsatisfiable).
    bool add_clause(std::vector<lit> lits);

    status solve(const std::vector<lit>& assumptions = {});

    // After satisfiable: value of each variable in the found model.
    bool model_value(std::uint32_t var) const;

    // After unsatisfiable under assumptions: a subset of the assumptions that
    // is jointly unsatisfiable with the clause set (not necessarily minimal).
    const std::vector<lit>& conflict_core() const { return conflict_core_; }

    // Budget: abort with resource_error past this many conflicts per solve().
    void set_conflict_budget(std::uint64_t budget) { conflict_budget_ = budget; }

    void dump_dimacs(std::ostream& os) const;

private:
    static constexpr int undef_level = -1;
    enum class lbool : std::uint8_t { unknown, tru, fls };

    struct clause_ref {
        std::uint32_t offset; // into arena_
        std::uint32_t size;
    };

    struct watcher {
        std::uint32_t cref;
        lit blocker;
    };

    lbool value(lit l) const {
        lbool v = assign_[var_of(l)];
        if (v == lbool::unknown)
            return v;
        bool pos = (v == lbool::tru);
        return pos == sign_of(l) ? lbool::tru : lbool::fls;
    }

    void enqueue(lit l, std::uint32_t reason);
    std::uint32_t propagate(); // returns conflicting clause index or no_clause
    void analyze(std::uint32_t confl, std::vector<lit>& learnt, int& backtrack_level);
    void analyze_final(lit p); // fills conflict_core_ from a failed assumption
    void backtrack(int level);
    lit pick_branch();
    void bump(std::uint32_t var);
    void attach(std::uint32_t cref);

    static constexpr std::uint32_t no_clause = 0xffffffffu;

    std::vector<lit> arena_;                // clause literals, contiguous
    std::vector<clause_ref> clauses_;       // original + learnt
    std::vector<std::vector<watcher>> watches_; // per literal
    std::vector<lbool> assign_;
    std::vector<bool> phase_;
    std::vector<int> level_;
    std::vector<std::uint32_t> reason_;
    std::vector<lit> trail_;
    std::vector<std::uint32_t> trail_lim_;
    std::vector<double> activity_;
    std::vector<bool> seen_;
    std::uint32_t qhead_ = 0;
    double var_inc_ = 1.0;
    bool ok_ = true;
    std::vector<lit> conflict_core_;
    std::uint64_t conflict_budget_ = 50'000'000;
};

} // namespace sat
} // namespace oreach
