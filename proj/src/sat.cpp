#include "oreach/sat.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>

namespace oreach {
namespace sat {

std::uint32_t solver::new_var() {
    std::uint32_t v = num_vars();
    assign_.push_back(lbool::unknown);
    phase_.push_back(false);
    level_.push_back(undef_level);
    reason_.push_back(no_clause);
    activity_.push_back(0.0);
    seen_.push_back(false);
    watches_.emplace_back();
    watches_.emplace_back();
    return v;
}

bool solver::add_clause(std::vector<lit> lits) {
    if (!ok_)
        return false;
    backtrack(0); // clauses are added between solves; drop any leftover model
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::vector<lit> kept;
    for (std::size_t i = 0; i < lits.size(); ++i) {
        if (i + 1 < lits.size() && lits[i + 1] == neg(lits[i]))
            return true; // tautology
        lbool v = value(lits[i]);
        if (v == lbool::tru)
            return true; // already satisfied at level 0
        if (v == lbool::unknown)
            kept.push_back(lits[i]);
    }
    if (kept.empty()) {
        ok_ = false;
        return false;
    }
    if (kept.size() == 1) {
        enqueue(kept[0], no_clause);
        if (propagate() != no_clause) {
            ok_ = false;
            return false;
        }
        return true;
    }
    clause_ref cr{static_cast<std::uint32_t>(arena_.size()), static_cast<std::uint32_t>(kept.size())};
    arena_.insert(arena_.end(), kept.begin(), kept.end());
    clauses_.push_back(cr);
    attach(static_cast<std::uint32_t>(clauses_.size() - 1));
    return true;
}

void solver::attach(std::uint32_t cref) {
    const clause_ref& c = clauses_[cref];
    lit l0 = arena_[c.offset], l1 = arena_[c.offset + 1];
    watches_[neg(l0)].push_back(watcher{cref, l1});
    watches_[neg(l1)].push_back(watcher{cref, l0});
}

void solver::enqueue(lit l, std::uint32_t reason) {
    assert(value(l) == lbool::unknown);
    assign_[var_of(l)] = sign_of(l) ? lbool::tru : lbool::fls;
    level_[var_of(l)] = static_cast<int>(trail_lim_.size());
    reason_[var_of(l)] = reason;
    trail_.push_back(l);
}

std::uint32_t solver::propagate() {
    while (qhead_ < trail_.size()) {
        lit p = trail_[qhead_++];
        auto& ws = watches_[p];
        std::size_t i = 0, j = 0;
        while (i < ws.size()) {
            watcher w = ws[i];
            if (value(w.blocker) == lbool::tru) {
                ws[j++] = ws[i++];
                continue;
            }
            clause_ref& c = clauses_[w.cref];
            lit* ls = arena_.data() + c.offset;
            // Keep the false watch at position 1.
            if (ls[0] == neg(p))
                std::swap(ls[0], ls[1]);
            assert(ls[1] == neg(p));
            if (value(ls[0]) == lbool::tru) {
                ws[i].blocker = ls[0];
                ws[j++] = ws[i++];
                continue;
            }
            bool moved = false;
            for (std::uint32_t k = 2; k < c.size; ++k) {
                if (value(ls[k]) != lbool::fls) {
                    std::swap(ls[1], ls[k]);
                    watches_[neg(ls[1])].push_back(watcher{w.cref, ls[0]});
                    moved = true;
                    break;
                }
            }
            if (moved) {
                ++i;
                continue;
            }
            if (value(ls[0]) == lbool::fls) {
                // Conflict: restore remaining watchers and report.
                while (i < ws.size())
                    ws[j++] = ws[i++];
                ws.resize(j);
                return w.cref;
            }
            enqueue(ls[0], w.cref);
            ws[j++] = ws[i++];
        }
        ws.resize(j);
    }
    return no_clause;
}

void solver::bump(std::uint32_t var) {
    activity_[var] += var_inc_;
    if (activity_[var] > 1e100) {
        for (auto& a : activity_)
            a *= 1e-100;
        var_inc_ *= 1e-100;
    }
}

void solver::analyze(std::uint32_t confl, std::vector<lit>& learnt, int& backtrack_level) {
    learnt.clear();
    learnt.push_back(0); // placeholder for the asserting literal
    int count = 0;
    lit p = 0;
    std::size_t index = trail_.size();
    int current = static_cast<int>(trail_lim_.size());
    bool first = true;

    std::uint32_t creason = confl;
    do {
        assert(creason != no_clause);
        const clause_ref& c = clauses_[creason];
        for (std::uint32_t k = (first ? 0 : 1); k < c.size; ++k) {
            lit q = arena_[c.offset + k];
            std::uint32_t v = var_of(q);
            if (seen_[v] || level_[v] == 0)
                continue;
            seen_[v] = true;
            bump(v);
            if (level_[v] >= current)
                ++count;
            else
                learnt.push_back(q);
        }
        while (!seen_[var_of(trail_[index - 1])])
            --index;
        p = trail_[--index];
        seen_[var_of(p)] = false;
        creason = reason_[var_of(p)];
        first = false;
        --count;
    } while (count > 0);
    learnt[0] = neg(p);

    if (learnt.size() == 1) {
        backtrack_level = 0;
    } else {
        std::size_t max_i = 1;
        for (std::size_t i = 2; i < learnt.size(); ++i)
            if (level_[var_of(learnt[i])] > level_[var_of(learnt[max_i])])
                max_i = i;
        std::swap(learnt[1], learnt[max_i]);
        backtrack_level = level_[var_of(learnt[1])];
    }
    for (lit q : learnt)
        seen_[var_of(q)] = false;
    var_inc_ *= (1.0 / 0.95);
}

void solver::analyze_final(lit p) {
    conflict_core_.clear();
    conflict_core_.push_back(p);
    if (trail_lim_.empty())
        return;
    seen_[var_of(p)] = true;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[0];) {
        std::uint32_t v = var_of(trail_[i]);
        if (!seen_[v])
            continue;
        if (reason_[v] == no_clause) {
            if (trail_[i] != p)
                conflict_core_.push_back(trail_[i]);
        } else {
            const clause_ref& c = clauses_[reason_[v]];
            for (std::uint32_t k = 1; k < c.size; ++k) {
                std::uint32_t u = var_of(arena_[c.offset + k]);
                if (level_[u] > 0)
                    seen_[u] = true;
            }
        }
        seen_[v] = false;
    }
    seen_[var_of(p)] = false;
}

void solver::backtrack(int level) {
    if (static_cast<int>(trail_lim_.size()) <= level)
        return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[level];) {
        std::uint32_t v = var_of(trail_[i]);
        phase_[v] = (assign_[v] == lbool::tru);
        assign_[v] = lbool::unknown;
        reason_[v] = no_clause;
        level_[v] = undef_level;
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = static_cast<std::uint32_t>(trail_.size());
}

lit solver::pick_branch() {
    std::uint32_t best = 0xffffffffu;
    double best_act = -1.0;
    for (std::uint32_t v = 0; v < num_vars(); ++v) {
        if (assign_[v] != lbool::unknown)
            continue;
        if (activity_[v] > best_act) {
            best_act = activity_[v];
            best = v;
        }
    }
    if (best == 0xffffffffu)
        return 0xffffffffu;
    return mk_lit(best, phase_[best]);
}

status solver::solve(const std::vector<lit>& assumptions) {
    conflict_core_.clear();
    if (!ok_)
        return status::unsatisfiable;
    backtrack(0);
    if (propagate() != no_clause) {
        ok_ = false;
        return status::unsatisfiable;
    }

    std::uint64_t conflicts = 0;
    std::uint64_t restart_limit = 100;
    std::uint64_t conflicts_since_restart = 0;

    for (;;) {
        std::uint32_t confl = propagate();
        if (confl != no_clause) {
            ++conflicts;
            ++conflicts_since_restart;
            if (conflicts > conflict_budget_)
                throw resource_error("sat: conflict budget exceeded");
            if (trail_lim_.empty()) {
                ok_ = false;
                return status::unsatisfiable;
            }
            std::vector<lit> learnt;
            int back_level = 0;
            analyze(confl, learnt, back_level);
            backtrack(back_level);
            if (learnt.size() == 1) {
                if (value(learnt[0]) == lbool::fls) {
                    ok_ = false; // level-0 contradiction
                    return status::unsatisfiable;
                }
                if (value(learnt[0]) == lbool::unknown)
                    enqueue(learnt[0], no_clause);
            } else {
                clause_ref cr{static_cast<std::uint32_t>(arena_.size()),
                              static_cast<std::uint32_t>(learnt.size())};
                arena_.insert(arena_.end(), learnt.begin(), learnt.end());
                clauses_.push_back(cr);
                std::uint32_t cref = static_cast<std::uint32_t>(clauses_.size() - 1);
                attach(cref);
                enqueue(learnt[0], cref);
            }
            continue;
        }

        if (conflicts_since_restart >= restart_limit &&
            trail_lim_.size() > assumptions.size()) {
            conflicts_since_restart = 0;
            restart_limit = restart_limit + restart_limit / 2;
            backtrack(static_cast<int>(assumptions.size()));
            continue;
        }

        // Place pending assumptions as decisions.
        if (trail_lim_.size() < assumptions.size()) {
            lit a = assumptions[trail_lim_.size()];
            if (value(a) == lbool::tru) {
                trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
                continue;
            }
            if (value(a) == lbool::fls) {
                analyze_final(a);
                return status::unsatisfiable;
            }
            trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
            enqueue(a, no_clause);
            continue;
        }

        lit next = pick_branch();
        if (next == 0xffffffffu)
            return status::satisfiable;
        trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
        enqueue(next, no_clause);
    }
}

bool solver::model_value(std::uint32_t var) const {
    assert(var < num_vars());
    return assign_[var] == lbool::tru;
}

void solver::dump_dimacs(std::ostream& os) const {
    std::size_t units = 0;
    for (std::size_t i = 0; i < trail_.size() && (trail_lim_.empty() || i < trail_lim_[0]); ++i)
        ++units;
    os << "p cnf " << num_vars() << " " << (clauses_.size() + units) << "\n";
    auto emit = [&](lit l) { os << (sign_of(l) ? "" : "-") << (var_of(l) + 1); };
    for (std::size_t i = 0; i < trail_.size() && (trail_lim_.empty() || i < trail_lim_[0]); ++i) {
        emit(trail_[i]);
        os << " 0\n";
    }
    for (const auto& c : clauses_) {
        for (std::uint32_t k = 0; k < c.size; ++k) {
            emit(arena_[c.offset + k]);
            os << " ";
        }
        os << "0\n";
    }
}

} // namespace sat
} // namespace oreach
