#include "oreach/breach.hpp"
#include "oreach/cover.hpp"
#include "oreach/ground_sat.hpp"
#include "oreach/oracle.hpp"
#include "oreach/parser.hpp"
#include "oreach/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_unsafe = 1;
constexpr int exit_usage = 2;
constexpr int exit_resource = 3;

int log_level() {
    const char* env = std::getenv("OREACH_LOG");
    if (!env)
        return 0;
    std::string s(env);
    if (s == "debug" || s == "2")
        return 2;
    if (s == "info" || s == "1")
        return 1;
    return 0;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct loaded_ontology {
    oreach::ontology onto;
    oreach::universal_theory theory;
};

loaded_ontology load_ontology(const std::string& path, const std::string& with_undef,
                              oreach::vocab& v) {
    auto parsed = oreach::parse_onto(read_file(path), path, v);
    loaded_ontology out;
    out.onto = std::move(parsed.onto);
    if (!with_undef.empty()) {
        oreach::symbol u = v.intern(with_undef, oreach::symbol_kind::individual);
        out.onto = oreach::undefined_value_closure(out.onto, u);
    }
    auto diags = oreach::validate(out.onto, v);
    if (!diags.empty()) {
        for (const auto& d : diags)
            std::cerr << path << ": " << d << "\n";
        throw std::runtime_error("ontology failed validation");
    }
    out.theory = oreach::standard_translate(out.onto);
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"safety verification of ontology-based artifact systems"};
    app.require_subcommand(1);

    // check-onto
    auto* cmd_check = app.add_subcommand("check-onto", "parse and validate an ontology file");
    std::string check_file;
    cmd_check->add_option("file", check_file)->required();

    // translate
    auto* cmd_translate =
        app.add_subcommand("translate", "dump the universal theory of an ontology");
    std::string tr_file, tr_undef;
    cmd_translate->add_option("file", tr_file)->required();
    cmd_translate->add_option("--with-undef", tr_undef, "add the undefined-value closure");

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "backward-reachability safety check");
    std::string vf_onto, vf_sas, vf_unsafe, vf_unsafe_file, vf_trace_out, vf_undef, vf_dimacs;
    unsigned vf_max_iters = 10000, vf_jobs = 1;
    cmd_verify->add_option("--onto", vf_onto)->required();
    cmd_verify->add_option("--sas", vf_sas)->required();
    cmd_verify->add_option("--unsafe", vf_unsafe, "safety formula (undesired states)");
    cmd_verify->add_option("--unsafe-file", vf_unsafe_file);
    cmd_verify->add_option("--trace-out", vf_trace_out, "write the verdict JSON here too");
    cmd_verify->add_option("--max-iters", vf_max_iters);
    cmd_verify->add_option("--with-undef", vf_undef);
    cmd_verify->add_option("--jobs", vf_jobs, "parallel quantifier-elimination workers");
    cmd_verify->add_option("--dimacs", vf_dimacs, "dump the shared theory grounding as DIMACS");

    // qe
    auto* cmd_qe = app.add_subcommand("qe", "quantifier elimination for a constraint");
    std::string qe_onto, qe_constraint, qe_drop, qe_undef;
    cmd_qe->add_option("--onto", qe_onto)->required();
    cmd_qe->add_option("--constraint", qe_constraint)->required();
    cmd_qe->add_option("--drop", qe_drop, "comma-separated variables to eliminate")->required();
    cmd_qe->add_option("--with-undef", qe_undef);

    // oracle verify
    auto* cmd_oracle = app.add_subcommand("oracle", "brute-force cross-checks");
    auto* cmd_oracle_verify =
        cmd_oracle->add_subcommand("verify", "bounded forward search for a violation");
    std::string ov_onto, ov_sas, ov_unsafe, ov_undef;
    unsigned ov_domain = 5, ov_depth = 5, ov_samples = 300;
    std::uint64_t ov_seed = 1;
    cmd_oracle_verify->add_option("--onto", ov_onto)->required();
    cmd_oracle_verify->add_option("--sas", ov_sas)->required();
    cmd_oracle_verify->add_option("--unsafe", ov_unsafe)->required();
    cmd_oracle_verify->add_option("--domain", ov_domain)->required();
    cmd_oracle_verify->add_option("--depth", ov_depth)->required();
    cmd_oracle_verify->add_option("--with-undef", ov_undef);
    cmd_oracle_verify->add_option("--samples", ov_samples);
    cmd_oracle_verify->add_option("--seed", ov_seed);

    CLI11_PARSE(app, argc, argv);

    oreach::vocab v;

    if (cmd_check->parsed()) {
        auto parsed = oreach::parse_onto(read_file(check_file), check_file, v);
        auto diags = oreach::validate(parsed.onto, v);
        for (const auto& d : diags)
            std::cerr << check_file << ": " << d << "\n";
        if (!diags.empty())
            return exit_usage;
        std::cout << "ok: " << parsed.onto.tbox.size() << " inclusions, "
                  << parsed.onto.abox.size() << " assertions\n";
        return exit_ok;
    }

    if (cmd_translate->parsed()) {
        auto loaded = load_ontology(tr_file, tr_undef, v);
        for (const auto& c : loaded.theory.clauses)
            std::cout << oreach::to_string(c, v) << "\n";
        for (const auto& l : loaded.theory.ground)
            std::cout << oreach::to_string(l, v) << "\n";
        return exit_ok;
    }

    if (cmd_verify->parsed()) {
        if (vf_unsafe.empty() == vf_unsafe_file.empty()) {
            std::cerr << "verify: exactly one of --unsafe / --unsafe-file is required\n";
            return exit_usage;
        }
        auto loaded = load_ontology(vf_onto, vf_undef, v);
        auto parsed = oreach::parse_sas(read_file(vf_sas), vf_sas, v, loaded.onto);
        oreach::artifact_system sys =
            oreach::eliminate_case_functions(parsed.system, loaded.theory);
        std::string nu_text = vf_unsafe.empty() ? read_file(vf_unsafe_file) : vf_unsafe;
        oreach::qff nu = oreach::parse_formula(nu_text, v);

        oreach::breach_options opts;
        opts.max_iterations = vf_max_iters;
        opts.jobs = vf_jobs;
        if (log_level() >= 1)
            opts.log = [](const std::string& line) { std::cerr << line << "\n"; };

        std::string json;
        int code = exit_ok;
        try {
            oreach::verdict vd = oreach::breach(sys, loaded.theory, nu, v, opts);
            json = oreach::render_report(vd, sys, v);
            code = vd.status == oreach::verdict_status::safe ? exit_ok : exit_unsafe;
        } catch (const oreach::resource_error& e) {
            std::cerr << "inconclusive: " << e.what() << "\n";
            json = oreach::render_inconclusive(vf_max_iters);
            code = exit_resource;
        }
        std::cout << json;
        if (!vf_trace_out.empty()) {
            std::ofstream out(vf_trace_out, std::ios::binary);
            out << json;
        }
        if (!vf_dimacs.empty()) {
            // Fresh grounding of the theory over the system's scope, as fed
            // to the frame-level satisfiability checks.
            std::vector<std::uint32_t> dom_vars = sys.vars;
            for (const auto& tau : sys.transitions)
                for (auto p : tau.params)
                    if (std::find(dom_vars.begin(), dom_vars.end(), p) == dom_vars.end())
                        dom_vars.push_back(p);
            oreach::qff iota = sys.initial_formula();
            const oreach::qff* fs[] = {&iota, &nu};
            auto dom = oreach::build_domain(loaded.theory, fs, sys.scope_individuals(), dom_vars);
            std::uint32_t nc = v.count(oreach::symbol_kind::concept_name);
            std::uint32_t nr = v.count(oreach::symbol_kind::role_name);
            oreach::sat_session session(loaded.theory, dom, nc, nr);
            std::ofstream out(vf_dimacs, std::ios::binary);
            session.dump_dimacs(out);
        }
        return code;
    }

    if (cmd_qe->parsed()) {
        auto loaded = load_ontology(qe_onto, qe_undef, v);
        oreach::qff f = oreach::parse_formula(qe_constraint, v, /*auto_declare_vars=*/true);
        std::set<std::uint32_t> drop;
        std::stringstream ss(qe_drop);
        std::string name;
        while (std::getline(ss, name, ',')) {
            if (name.empty())
                continue;
            auto s = v.lookup(name);
            if (!s || s->kind != oreach::symbol_kind::variable) {
                std::cerr << "qe: '" << name << "' is not a variable of the constraint\n";
                return exit_usage;
            }
            drop.insert(s->id);
        }
        oreach::qff out = oreach::eliminate_qff(loaded.theory, f, drop, {});
        std::cout << oreach::print_formula(out, v) << "\n";
        return exit_ok;
    }

    if (cmd_oracle_verify->parsed()) {
        auto loaded = load_ontology(ov_onto, ov_undef, v);
        auto parsed = oreach::parse_sas(read_file(ov_sas), ov_sas, v, loaded.onto);
        oreach::qff nu = oreach::parse_formula(ov_unsafe, v);
        oreach::forward_options fopts;
        fopts.model_samples = ov_samples;
        fopts.seed = ov_seed;
        auto result = oreach::bounded_forward_verify(parsed.system, loaded.theory, nu, ov_domain,
                                                     ov_depth, fopts);
        if (result.violation) {
            std::cout << "violation after " << result.violation->transitions.size()
                      << " transitions:";
            for (auto j : result.violation->transitions)
                std::cout << " " << parsed.system.transitions[j].name;
            std::cout << "\n";
            return exit_unsafe;
        }
        std::cout << "no violation within bounds (domain<=" << ov_domain << ", depth<=" << ov_depth
                  << ", models=" << result.models_explored << ")\n";
        return exit_ok;
    }

    return exit_usage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const oreach::parse_error& e) {
        std::cerr << e.what() << "\n";
        return exit_usage;
    } catch (const oreach::resource_error& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return exit_resource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
}
