#pragma once

#include "oreach/logic.hpp"
#include "oreach/ontology.hpp"
#include "oreach/sas.hpp"
#include "oreach/vocab.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace oreach {

struct source_span {
    std::string file;
    std::uint32_t line = 0, column = 0;
    std::uint32_t end_line = 0, end_column = 0;
};

struct parse_error : std::runtime_error {
    parse_error(const source_span& at, const std::string& message);
    source_span span;
};

struct parsed_ontology {
    ontology onto;
    std::vector<source_span> tbox_spans; // aligned with onto.tbox
    std::vector<source_span> abox_spans; // aligned with onto.abox
};

// One statement per line, '#' comments. Concept-versus-role inclusion lines
// are disambiguated by usage evidence across the whole file (existentials,
// inverse markers, assertion arities); bare `X <= Y` lines with no evidence
// default to concept inclusions.
parsed_ontology parse_onto(const std::string& text, const std::string& filename, vocab& v);

struct parsed_system {
    artifact_system system;
    std::vector<source_span> transition_spans;
};

// Statements are ';'-terminated. Names in guards and updates must be declared
// artifact variables, transition parameters, or constants in scope (ontology
// individuals, init values, `consts` declarations); anything else is an error.
parsed_system parse_sas(const std::string& text, const std::string& filename, vocab& v,
                        const ontology& onto);

// Formula over &, |, !, =, !=, parentheses and true/false. When
// `auto_declare_vars` is set, unknown names in term position are interned as
// variables and unknown predicates by arity; otherwise they are errors.
qff parse_formula(const std::string& text, vocab& v, bool auto_declare_vars = false);

std::string print_onto(const ontology& o, const vocab& v);
std::string print_sas(const artifact_system& s, const vocab& v);
std::string print_formula(const qff& f, const vocab& v);

} // namespace oreach
