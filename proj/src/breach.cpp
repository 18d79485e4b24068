#include "oreach/breach.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <future>
#include <stdexcept>

namespace oreach {

namespace {

qff negated_region(const std::vector<const frame_disjunct*>& region) {
    std::vector<qff> parts;
    parts.reserve(region.size());
    for (const auto* d : region)
        parts.push_back(qff::neg(d->cube.to_qff()));
    return qff::all_of(std::move(parts));
}

qff region_formula(const std::vector<const frame_disjunct*>& region) {
    std::vector<qff> parts;
    parts.reserve(region.size());
    for (const auto* d : region)
        parts.push_back(d->cube.to_qff());
    return qff::any_of(std::move(parts));
}

} // namespace

unsafe_trace reconstruct_trace(const artifact_system& s, const universal_theory& t, const qff& nu,
                               vocab& v, const std::vector<frame_disjunct>& arena,
                               std::size_t hit_index, bool want_witness) {
    unsafe_trace trace;
    // The hit disjunct lies k frames back from nu; its own transition fires
    // first, then the parent's, down to the frame-0 root.
    for (std::int64_t at = static_cast<std::int64_t>(hit_index); arena[at].parent >= 0;
         at = arena[at].parent)
        trace.transition_indices.push_back(arena[at].via);
    for (auto j : trace.transition_indices)
        trace.transition_names.push_back(s.transitions[j].name);

    trace.star = build_unsafe_formula(s, nu, trace.transition_indices, v);

    sat_options opts;
    opts.extra_individuals = s.scope_individuals();
    auto model = solve_model(t, trace.star.formula, opts);
    if (!model)
        throw std::logic_error("breach: reconstructed trace failed re-verification");

    if (want_witness) {
        trace.witness = model->interp;
        for (const auto& step : trace.star.step_vars) {
            std::vector<std::uint32_t> vals;
            vals.reserve(step.size());
            for (auto var_id : step)
                vals.push_back(model->var_class.at(var_id));
            trace.step_values.push_back(std::move(vals));
        }
        for (const auto& step : trace.star.step_params) {
            std::vector<std::uint32_t> vals;
            vals.reserve(step.size());
            for (auto var_id : step)
                vals.push_back(model->var_class.at(var_id));
            trace.param_values.push_back(std::move(vals));
        }
    }
    return trace;
}

verdict breach(const artifact_system& s, const universal_theory& t, const qff& nu, vocab& v,
               const breach_options& opts) {
    if (!s.case_free())
        throw std::invalid_argument("breach: eliminate case functions first");
    for (auto var : free_vars(nu))
        if (std::find(s.vars.begin(), s.vars.end(), var) == s.vars.end())
            throw std::invalid_argument("breach: safety formula mentions a non-artifact variable");

    const auto t_start = std::chrono::steady_clock::now();

    // One grounding for every frame-level test: artifact variables, all
    // transition parameters, and every constant in scope.
    std::vector<std::uint32_t> dom_vars = s.vars;
    for (const auto& tau : s.transitions)
        for (auto p : tau.params)
            if (std::find(dom_vars.begin(), dom_vars.end(), p) == dom_vars.end())
                dom_vars.push_back(p);
    std::vector<std::uint32_t> scope = s.scope_individuals();
    qff iota = s.initial_formula();
    const qff* fs[] = {&iota, &nu};
    grounding_domain dom = build_domain(t, fs, scope, dom_vars);
    std::uint32_t nc = 0, nr = 0;
    {
        signature sig = t.sig();
        sig.merge(sig_of(nu));
        for (const auto& tau : s.transitions)
            sig.merge(sig_of(tau.guard));
        for (auto id : sig.concepts)
            nc = std::max(nc, id + 1);
        for (auto id : sig.roles)
            nr = std::max(nr, id + 1);
    }
    sat_session session(t, dom, nc, nr);
    session.set_conflict_budget(opts.sat_conflict_budget);

    verdict out;
    std::vector<frame_disjunct> arena;
    std::vector<std::size_t> frame; // indices into arena
    std::vector<std::size_t> accumulated; // B, as arena indices

    for (const auto& cube : to_dnf(nu)) {
        arena.push_back(frame_disjunct{cube, -1, 0, 0});
        frame.push_back(arena.size() - 1);
    }

    auto region_ptrs = [&](const std::vector<std::size_t>& idx) {
        std::vector<const frame_disjunct*> ptrs;
        ptrs.reserve(idx.size());
        for (auto i : idx)
            ptrs.push_back(&arena[i]);
        return ptrs;
    };

    auto log = [&](const std::string& line) {
        if (opts.log)
            opts.log(line);
    };

    std::uint32_t n = 0;
    for (;;) {
        // Fixpoint test: loop while phi & !B is satisfiable.
        qff phi = region_formula(region_ptrs(frame));
        qff not_b = negated_region(region_ptrs(accumulated));
        if (!session.query(qff::all_of({phi, not_b})))
            break; // fixpoint

        if (n >= opts.max_iterations)
            throw resource_error("breach: iteration limit reached (inconclusive)");

        // Breach test: does the frontier meet the initial states? Checked per
        // disjunct so the hit carries its provenance.
        for (auto di : frame) {
            if (session.query(qff::all_of({iota, arena[di].cube.to_qff()}))) {
                out.status = verdict_status::unsafe;
                out.iterations = n;
                out.trace = reconstruct_trace(s, t, nu, v, arena, di, opts.extract_witness);
                out.stats.iterations = n;
                out.stats.trace_reverified = true;
                log("[oreach] unsafe at n=" + std::to_string(n) + " trace length " +
                    std::to_string(out.trace->transition_indices.size()));
                return out;
            }
        }

        // Accumulate: B <- phi | B.
        std::size_t b_before = accumulated.size();
        accumulated.insert(accumulated.end(), frame.begin(), frame.end());

        // Invariant: T |= B_n <-> B_{n-1} | phi_{n-1}. B is stored as the
        // concatenation of all frame disjuncts, so this asserts that the
        // stored region really is the disjunction of the frames so far.
        if (opts.check_invariants) {
            qff b_formula = region_formula(region_ptrs(accumulated));
            std::vector<std::size_t> split(accumulated.begin(),
                                           accumulated.begin() +
                                               static_cast<std::ptrdiff_t>(b_before));
            split.insert(split.end(), frame.begin(), frame.end());
            qff frames_formula = region_formula(region_ptrs(split));
            if (session.query(qff::all_of({b_formula, qff::neg(frames_formula)})) ||
                session.query(qff::all_of({frames_formula, qff::neg(b_formula)})))
                throw std::logic_error("breach: accumulator invariant failed");
            out.stats.invariant_checks_passed++;
        }

        // Regress: phi <- QE(Pre(tau, phi)), disjunct by disjunct.
        // Preimage disjuncts unsatisfiable with T or already inside B are
        // dropped before elimination; their covers would be absorbed by the
        // fixpoint test anyway.
        qff not_b_now = negated_region(region_ptrs(accumulated));
        struct work_item {
            std::uint32_t via;
            std::size_t parent;
            constraint raw;
            std::set<std::uint32_t> drop;
        };
        std::vector<work_item> work;
        for (std::uint32_t j = 0; j < s.transitions.size(); ++j) {
            const transition& tau = s.transitions[j];
            std::set<std::uint32_t> drop(tau.params.begin(), tau.params.end());
            for (auto di : frame) {
                preimage_result pre = preimage(tau, s.vars, arena[di].cube.to_qff());
                for (auto& raw : pre.disjuncts) {
                    if (!session.query(qff::all_of({raw.to_qff(), not_b_now})))
                        continue;
                    work.push_back(work_item{j, di, std::move(raw), drop});
                }
            }
        }

        // Elimination is pure in (T, cube); items may run in parallel, with
        // results assembled in submission order so output stays deterministic.
        std::vector<qff> covers(work.size());
        auto run_item = [&](std::size_t w) {
            target_vocabulary voc = target_vocabulary::make(t, work[w].raw, work[w].drop, scope);
            return eliminate(t, work[w].raw, work[w].drop, voc, opts.cover).formula;
        };
        if (opts.jobs > 1 && work.size() > 1) {
            std::vector<std::future<qff>> futures;
            futures.reserve(work.size());
            for (std::size_t w = 0; w < work.size(); ++w)
                futures.push_back(std::async(std::launch::async, run_item, w));
            for (std::size_t w = 0; w < work.size(); ++w)
                covers[w] = futures[w].get();
        } else {
            for (std::size_t w = 0; w < work.size(); ++w)
                covers[w] = run_item(w);
        }

        if (opts.check_invariants) {
            // Covers are entailed by the preimages they eliminate.
            for (std::size_t w = 0; w < work.size(); ++w)
                if (session.query(
                        qff::all_of({work[w].raw.to_qff(), qff::neg(covers[w])})))
                    throw std::logic_error("breach: cover soundness failed");
        }

        std::vector<std::size_t> next;
        for (std::size_t w = 0; w < work.size(); ++w) {
            for (const auto& cube : to_dnf(covers[w])) {
                // Frames stay over the artifact variables.
                for (auto var : cube.free_vars())
                    if (std::find(s.vars.begin(), s.vars.end(), var) == s.vars.end())
                        throw std::logic_error("breach: frame variable escaped elimination");
                bool subsumed = false;
                for (auto ni : next)
                    if (cube.subsumed_by(arena[ni].cube)) {
                        subsumed = true;
                        break;
                    }
                if (subsumed)
                    continue;
                std::erase_if(next,
                              [&](std::size_t ni) { return arena[ni].cube.subsumed_by(cube); });
                if (!session.query(qff::all_of({cube.to_qff(), not_b_now})))
                    continue;
                arena.push_back(frame_disjunct{cube, static_cast<std::int64_t>(work[w].parent),
                                               work[w].via, n + 1});
                next.push_back(arena.size() - 1);
            }
        }
        frame = std::move(next);
        ++n;
        out.stats.frame_sizes.push_back(frame.size());

        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t_start)
                           .count();
        log("[oreach] n=" + std::to_string(n) + " |phi|=" + std::to_string(frame.size()) +
            " |B|=" + std::to_string(accumulated.size()) + " elapsed_ms=" +
            std::to_string(elapsed));
    }

    out.status = verdict_status::safe;
    out.iterations = n;
    out.stats.iterations = n;

    // Post-fixpoint stability: one more regression stays inside B.
    if (opts.check_invariants) {
        qff b_formula = region_formula(region_ptrs(accumulated));
        for (std::uint32_t j = 0; j < s.transitions.size(); ++j) {
            const transition& tau = s.transitions[j];
            std::set<std::uint32_t> drop(tau.params.begin(), tau.params.end());
            for (auto di : frame) {
                preimage_result pre = preimage(tau, s.vars, arena[di].cube.to_qff());
                for (const auto& raw : pre.disjuncts) {
                    target_vocabulary voc = target_vocabulary::make(t, raw, drop, scope);
                    cover_result cov = eliminate(t, raw, drop, voc, opts.cover);
                    if (session.query(qff::all_of({cov.formula, qff::neg(b_formula)})))
                        throw std::logic_error("breach: post-fixpoint stability failed");
                }
            }
        }
        out.stats.stability_checked = true;
    }
    log("[oreach] safe after n=" + std::to_string(n) + " iterations");
    return out;
}

} // namespace oreach
