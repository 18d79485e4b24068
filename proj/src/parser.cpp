#include "oreach/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

namespace oreach {

parse_error::parse_error(const source_span& at, const std::string& message)
    : std::runtime_error(at.file + ":" + std::to_string(at.line) + ":" +
                         std::to_string(at.column) + ": " + message),
      span(at) {}

namespace {

enum class tok : std::uint8_t {
    ident, lparen, rparen, lbrace, rbrace, comma, amp, pipe, bang, dot, minus,
    eq, neq, leq, big_arrow, small_arrow, assign, semicolon, colon, eof,
};

struct token {
    tok kind = tok::eof;
    std::string text;
    std::uint32_t line = 1, column = 1;
};

struct lexer {
    const std::string& src;
    std::string file;
    std::size_t pos = 0;
    std::uint32_t line = 1, col = 1;

    lexer(const std::string& s, std::string f) : src(s), file(std::move(f)) {}

    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n && pos < src.size(); ++i, ++pos) {
            if (src[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    }

    source_span here() const { return source_span{file, line, col, line, col}; }

    std::vector<token> run() {
        std::vector<token> out;
        while (pos < src.size()) {
            char c = src[pos];
            if (c == '#') {
                while (pos < src.size() && src[pos] != '\n')
                    advance(1);
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
                continue;
            }
            token t;
            t.line = line;
            t.column = col;
            auto two = src.substr(pos, 2);
            auto three = src.substr(pos, 3);
            if (three == "==>") {
                t.kind = tok::big_arrow;
                advance(3);
            } else if (two == "!=") {
                t.kind = tok::neq;
                advance(2);
            } else if (two == ":=") {
                t.kind = tok::assign;
                advance(2);
            } else if (two == "<=") {
                t.kind = tok::leq;
                advance(2);
            } else if (two == "->") {
                t.kind = tok::small_arrow;
                advance(2);
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos;
                while (pos < src.size() &&
                       (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
                    advance(1);
                t.kind = tok::ident;
                t.text = src.substr(start, pos - start);
            } else {
                switch (c) {
                case '(': t.kind = tok::lparen; break;
                case ')': t.kind = tok::rparen; break;
                case '{': t.kind = tok::lbrace; break;
                case '}': t.kind = tok::rbrace; break;
                case ',': t.kind = tok::comma; break;
                case '&': t.kind = tok::amp; break;
                case '|': t.kind = tok::pipe; break;
                case '!': t.kind = tok::bang; break;
                case '.': t.kind = tok::dot; break;
                case '-': t.kind = tok::minus; break;
                case '=': t.kind = tok::eq; break;
                case ';': t.kind = tok::semicolon; break;
                case ':': t.kind = tok::colon; break;
                default:
                    throw parse_error(here(), std::string("unexpected character '") + c + "'");
                }
                advance(1);
            }
            out.push_back(std::move(t));
        }
        token e;
        e.kind = tok::eof;
        e.line = line;
        e.column = col;
        out.push_back(e);
        return out;
    }
};

struct cursor {
    const std::vector<token>& toks;
    std::string file;
    std::size_t at = 0;

    const token& peek(std::size_t ahead = 0) const {
        return toks[std::min(at + ahead, toks.size() - 1)];
    }
    const token& next() { return toks[std::min(at++, toks.size() - 1)]; }
    bool accept(tok k) {
        if (peek().kind == k) {
            ++at;
            return true;
        }
        return false;
    }
    source_span span_of(const token& t) const {
        return source_span{file, t.line, t.column, t.line,
                           t.column + static_cast<std::uint32_t>(t.text.size())};
    }
    const token& expect(tok k, const std::string& what) {
        if (peek().kind != k)
            throw parse_error(span_of(peek()), "expected " + what);
        return toks[at++];
    }
    bool at_keyword(const std::string& kw, std::size_t ahead = 0) const {
        return peek(ahead).kind == tok::ident && peek(ahead).text == kw;
    }
    void expect_keyword(const std::string& kw) {
        if (!at_keyword(kw))
            throw parse_error(span_of(peek()), "expected '" + kw + "'");
        ++at;
    }
};

// ---------------------------------------------------------------- ontology

enum class name_use : std::uint8_t { unknown, concept_name, role_name };

struct onto_line {
    std::vector<token> toks;
    std::uint32_t line;
};

bool reserved_word(const std::string& s) {
    static const std::set<std::string> words{"not",  "exists", "vars",  "init",  "consts",
                                             "transition", "params", "guard", "case",
                                             "true", "false"};
    return words.count(s) > 0;
}

symbol intern_at(vocab& v, const cursor& c, const token& t, symbol_kind kind) {
    if (reserved_word(t.text))
        throw parse_error(c.span_of(t), "'" + t.text + "' is a reserved word");
    try {
        return v.intern(t.text, kind);
    } catch (const vocab_error& e) {
        throw parse_error(c.span_of(t), e.what());
    }
}

} // namespace

parsed_ontology parse_onto(const std::string& text, const std::string& filename, vocab& v) {
    // Split into per-line token lists first: the grammar is line-oriented.
    std::vector<onto_line> lines;
    {
        lexer lx(text, filename);
        auto toks = lx.run();
        onto_line cur;
        cur.line = toks.empty() ? 1 : toks[0].line;
        for (auto& t : toks) {
            if (t.kind == tok::eof)
                break;
            if (!cur.toks.empty() && t.line != cur.toks[0].line) {
                lines.push_back(std::move(cur));
                cur = onto_line{};
            }
            if (cur.toks.empty())
                cur.line = t.line;
            cur.toks.push_back(t);
        }
        if (!cur.toks.empty())
            lines.push_back(std::move(cur));
    }

    // Pass 1: classify lines and gather name-kind evidence.
    std::map<std::string, name_use> uses;
    auto mark = [&](const token& t, name_use u, const cursor& c) {
        auto& cur = uses[t.text];
        if (cur == name_use::unknown)
            cur = u;
        else if (cur != u)
            throw parse_error(c.span_of(t), "name '" + t.text + "' used both as concept and role");
    };

    struct line_info {
        bool is_tbox = false;
        bool undetermined = false; // bare NAME <= [not] NAME
    };
    std::vector<line_info> infos(lines.size());

    for (std::size_t li = 0; li < lines.size(); ++li) {
        auto toks = lines[li].toks;
        token eoft;
        eoft.kind = tok::eof;
        eoft.line = toks.back().line;
        eoft.column = toks.back().column + 1;
        toks.push_back(eoft);
        cursor c{toks, filename};
        bool has_leq = false;
        for (const auto& t : toks)
            has_leq = has_leq || t.kind == tok::leq;
        infos[li].is_tbox = has_leq;
        if (!has_leq) {
            // ABox: [not] NAME(...) gives arity evidence.
            if (c.at_keyword("not"))
                c.next();
            if (c.peek().kind == tok::ident && c.peek(1).kind == tok::lparen) {
                const token& name = c.peek();
                std::size_t commas = 0;
                for (std::size_t k = c.at; k < toks.size() && toks[k].kind != tok::rparen; ++k)
                    commas += toks[k].kind == tok::comma;
                mark(name, commas == 0 ? name_use::concept_name : name_use::role_name, c);
            }
            continue;
        }
        // TBox evidence.
        bool inverse_seen = false, exists_seen = false, amp_seen = false;
        for (std::size_t k = 0; k + 1 < toks.size(); ++k) {
            if (toks[k].kind == tok::ident && toks[k + 1].kind == tok::minus)
                inverse_seen = true;
            if (toks[k].kind == tok::ident && toks[k].text == "exists")
                exists_seen = true;
            if (toks[k].kind == tok::amp)
                amp_seen = true;
        }
        if (exists_seen) {
            // exists R [.A] <= [not] B : the role after 'exists', concepts after '.'/rhs.
            std::size_t k = 0;
            while (!(toks[k].kind == tok::ident && toks[k].text == "exists"))
                ++k;
            if (k + 1 < toks.size() && toks[k + 1].kind == tok::ident)
                mark(toks[k + 1], name_use::role_name, c);
        } else if (inverse_seen) {
            for (std::size_t k = 0; k < toks.size(); ++k)
                if (toks[k].kind == tok::ident && toks[k].text != "not")
                    mark(toks[k], name_use::role_name, c);
        } else if (amp_seen) {
            for (std::size_t k = 0; k < toks.size(); ++k)
                if (toks[k].kind == tok::ident && toks[k].text != "not")
                    mark(toks[k], name_use::concept_name, c);
        } else {
            infos[li].undetermined = true;
        }
    }

    // Fixpoint: a determined side of `X <= Y` determines the other.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t li = 0; li < lines.size(); ++li) {
            if (!infos[li].undetermined)
                continue;
            std::vector<const token*> names;
            for (const auto& t : lines[li].toks)
                if (t.kind == tok::ident && t.text != "not")
                    names.push_back(&t);
            name_use found = name_use::unknown;
            for (const auto* t : names) {
                auto it = uses.find(t->text);
                if (it != uses.end() && it->second != name_use::unknown)
                    found = it->second;
            }
            if (found != name_use::unknown) {
                cursor c{lines[li].toks, filename};
                for (const auto* t : names)
                    mark(*t, found, c);
                infos[li].undetermined = false;
                changed = true;
            }
        }
    }

    parsed_ontology out;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        auto toks = lines[li].toks;
        token eoft;
        eoft.kind = tok::eof;
        eoft.line = toks.back().line;
        eoft.column = toks.back().column + 1;
        toks.push_back(eoft);
        cursor c{toks, filename};
        source_span span{filename, lines[li].line, toks[0].column, toks.back().line,
                         toks.back().column};

        auto parse_role = [&]() {
            const token& name = c.expect(tok::ident, "role name");
            role_expr r;
            r.role = intern_at(v, c, name, symbol_kind::role_name).id;
            r.inverse = c.accept(tok::minus);
            return r;
        };

        if (infos[li].is_tbox) {
            if (c.at_keyword("exists")) {
                c.next();
                role_expr r = parse_role();
                concept_expr lhs;
                if (c.accept(tok::dot)) {
                    const token& qual = c.expect(tok::ident, "concept name after '.'");
                    lhs = concept_expr::some(
                        r, intern_at(v, c, qual, symbol_kind::concept_name).id);
                } else {
                    lhs = concept_expr::some(r);
                }
                c.expect(tok::leq, "'<='");
                concept_inclusion ci;
                ci.lhs = std::move(lhs);
                ci.rhs_negated = c.at_keyword("not") && (c.next(), true);
                if (c.at_keyword("exists"))
                    throw parse_error(c.span_of(c.peek()),
                                      "rhs of a concept inclusion must be a concept name");
                const token& rhs = c.expect(tok::ident, "concept name");
                if (c.peek().kind == tok::minus || c.peek().kind == tok::dot ||
                    c.peek().kind == tok::lparen)
                    throw parse_error(c.span_of(c.peek()),
                                      "rhs of a concept inclusion must be a concept name");
                ci.rhs_concept = intern_at(v, c, rhs, symbol_kind::concept_name).id;
                out.onto.tbox.emplace_back(std::move(ci));
            } else {
                // Either a concept conjunction or a role inclusion; resolved
                // by the collected evidence.
                const token& first = c.peek();
                name_use u = uses.count(first.text) ? uses[first.text] : name_use::unknown;
                bool role_line = u == name_use::role_name;
                if (role_line) {
                    role_inclusion ri;
                    ri.lhs = parse_role();
                    c.expect(tok::leq, "'<='");
                    ri.rhs_negated = c.at_keyword("not") && (c.next(), true);
                    ri.rhs = parse_role();
                    out.onto.tbox.emplace_back(std::move(ri));
                } else {
                    std::vector<std::uint32_t> conj;
                    const token& n0 = c.expect(tok::ident, "concept name");
                    conj.push_back(intern_at(v, c, n0, symbol_kind::concept_name).id);
                    while (c.accept(tok::amp)) {
                        const token& nk = c.expect(tok::ident, "concept name");
                        conj.push_back(intern_at(v, c, nk, symbol_kind::concept_name).id);
                    }
                    c.expect(tok::leq, "'<='");
                    concept_inclusion ci;
                    ci.lhs = concept_expr::conj(std::move(conj));
                    ci.rhs_negated = c.at_keyword("not") && (c.next(), true);
                    if (c.at_keyword("exists"))
                        throw parse_error(c.span_of(c.peek()),
                                          "rhs of a concept inclusion must be a concept name");
                    const token& rhs = c.expect(tok::ident, "concept name");
                    if (c.peek().kind == tok::lparen)
                        throw parse_error(c.span_of(c.peek()),
                                          "rhs of a concept inclusion must be a concept name");
                    ci.rhs_concept = intern_at(v, c, rhs, symbol_kind::concept_name).id;
                    out.onto.tbox.emplace_back(std::move(ci));
                }
            }
            if (c.peek().kind != tok::eof)
                throw parse_error(c.span_of(c.peek()), "trailing tokens after inclusion");
            out.tbox_spans.push_back(span);
        } else {
            assertion a;
            a.positive = !(c.at_keyword("not") && (c.next(), true));
            const token& first = c.expect(tok::ident, "assertion");
            if (c.accept(tok::lparen)) {
                const token& arg1 = c.expect(tok::ident, "individual name");
                if (c.accept(tok::comma)) {
                    const token& arg2 = c.expect(tok::ident, "individual name");
                    a.k = assertion::kind::role_assert;
                    a.pred = intern_at(v, c, first, symbol_kind::role_name).id;
                    a.a = intern_at(v, c, arg1, symbol_kind::individual).id;
                    a.b = intern_at(v, c, arg2, symbol_kind::individual).id;
                } else {
                    a.k = assertion::kind::concept_assert;
                    a.pred = intern_at(v, c, first, symbol_kind::concept_name).id;
                    a.a = intern_at(v, c, arg1, symbol_kind::individual).id;
                }
                c.expect(tok::rparen, "')'");
            } else if (c.peek().kind == tok::eq || c.peek().kind == tok::neq) {
                bool neqd = c.next().kind == tok::neq;
                if (neqd) {
                    if (!a.positive)
                        throw parse_error(span, "'not' cannot combine with '!='");
                    a.positive = false;
                }
                const token& arg2 = c.expect(tok::ident, "individual name");
                a.k = assertion::kind::equality_assert;
                a.a = intern_at(v, c, first, symbol_kind::individual).id;
                a.b = intern_at(v, c, arg2, symbol_kind::individual).id;
            } else {
                throw parse_error(c.span_of(c.peek()), "malformed assertion");
            }
            if (c.peek().kind != tok::eof)
                throw parse_error(c.span_of(c.peek()), "trailing tokens after assertion");
            out.onto.abox.push_back(a);
            out.abox_spans.push_back(span);
        }
    }
    return out;
}

// -------------------------------------------------------------- formulas

namespace {

struct formula_parser {
    cursor& c;
    vocab& v;
    bool auto_vars;

    term parse_term() {
        const token& t = c.expect(tok::ident, "term");
        auto s = v.lookup(t.text);
        if (s) {
            if (s->kind == symbol_kind::variable)
                return term::var(*s);
            if (s->kind == symbol_kind::individual)
                return term::ind(*s);
            throw parse_error(c.span_of(t), "'" + t.text + "' is a " +
                                                std::string(kind_name(s->kind)) +
                                                ", not a term");
        }
        if (!auto_vars)
            throw parse_error(c.span_of(t), "undeclared name '" + t.text + "'");
        return term::var(v.intern(t.text, symbol_kind::variable));
    }

    qff parse_atom_or_eq() {
        if (c.accept(tok::lparen)) {
            qff inner = parse_or();
            c.expect(tok::rparen, "')'");
            return inner;
        }
        if (c.at_keyword("true")) {
            c.next();
            return qff::top();
        }
        if (c.at_keyword("false")) {
            c.next();
            return qff::bottom();
        }
        if (c.peek().kind == tok::bang || c.at_keyword("not")) {
            c.next();
            return qff::neg(parse_atom_or_eq());
        }
        const token& first = c.peek();
        // Predicate application?
        if (first.kind == tok::ident && c.peek(1).kind == tok::lparen) {
            c.next();
            c.next();
            term a1 = parse_term();
            if (c.accept(tok::comma)) {
                term a2 = parse_term();
                c.expect(tok::rparen, "')'");
                auto s = v.lookup(first.text);
                if (!s && auto_vars)
                    s = v.intern(first.text, symbol_kind::role_name);
                if (!s || s->kind != symbol_kind::role_name)
                    throw parse_error(c.span_of(first),
                                      "'" + first.text + "' is not a role name");
                return qff::of(atom::role_app(*s, a1, a2));
            }
            c.expect(tok::rparen, "')'");
            auto s = v.lookup(first.text);
            if (!s && auto_vars)
                s = v.intern(first.text, symbol_kind::concept_name);
            if (!s || s->kind != symbol_kind::concept_name)
                throw parse_error(c.span_of(first), "'" + first.text + "' is not a concept name");
            return qff::of(atom::concept_app(*s, a1));
        }
        term a1 = parse_term();
        if (c.accept(tok::eq))
            return qff::of(atom::equality(a1, parse_term()));
        if (c.accept(tok::neq))
            return qff::neg(qff::of(atom::equality(a1, parse_term())));
        throw parse_error(c.span_of(c.peek()), "expected '=' or '!=' after term");
    }

    qff parse_and() {
        std::vector<qff> parts{parse_atom_or_eq()};
        while (c.accept(tok::amp))
            parts.push_back(parse_atom_or_eq());
        return qff::all_of(std::move(parts));
    }

    qff parse_or() {
        std::vector<qff> parts{parse_and()};
        while (c.accept(tok::pipe))
            parts.push_back(parse_and());
        return qff::any_of(std::move(parts));
    }
};

} // namespace

qff parse_formula(const std::string& text, vocab& v, bool auto_declare_vars) {
    lexer lx(text, "<formula>");
    auto toks = lx.run();
    cursor c{toks, "<formula>"};
    formula_parser p{c, v, auto_declare_vars};
    qff out = p.parse_or();
    if (c.peek().kind != tok::eof)
        throw parse_error(c.span_of(c.peek()), "trailing tokens after formula");
    return out;
}

// ------------------------------------------------------------------- sas

namespace {

struct sas_parser {
    cursor& c;
    vocab& v;
    artifact_system& sys;
    std::set<std::uint32_t> var_ids;     // artifact variables
    std::set<std::uint32_t> const_ids;   // constants in scope

    term resolve_term(const token& t, const std::set<std::uint32_t>& params) {
        auto s = v.lookup(t.text);
        if (!s)
            throw parse_error(c.span_of(t), "undeclared name '" + t.text + "'");
        if (s->kind == symbol_kind::variable) {
            if (!var_ids.count(s->id) && !params.count(s->id))
                throw parse_error(c.span_of(t),
                                  "variable '" + t.text + "' is not in scope here");
            return term::var(*s);
        }
        if (s->kind == symbol_kind::individual) {
            if (!const_ids.count(s->id))
                throw parse_error(c.span_of(t), "constant '" + t.text + "' is not declared");
            return term::ind(*s);
        }
        throw parse_error(c.span_of(t),
                          "'" + t.text + "' is a " + std::string(kind_name(s->kind)) +
                              ", not a term");
    }

    literal parse_literal(const std::set<std::uint32_t>& params) {
        bool positive = true;
        if (c.peek().kind == tok::bang || c.at_keyword("not")) {
            c.next();
            positive = false;
        }
        const token& first = c.expect(tok::ident, "literal");
        if (c.accept(tok::lparen)) {
            const token& t1 = c.expect(tok::ident, "term");
            term a1 = resolve_term(t1, params);
            if (c.accept(tok::comma)) {
                const token& t2 = c.expect(tok::ident, "term");
                term a2 = resolve_term(t2, params);
                c.expect(tok::rparen, "')'");
                auto s = v.lookup(first.text);
                if (!s || s->kind != symbol_kind::role_name)
                    throw parse_error(c.span_of(first),
                                      "'" + first.text + "' is not a role name");
                return literal{atom::role_app(*s, a1, a2), positive};
            }
            c.expect(tok::rparen, "')'");
            auto s = v.lookup(first.text);
            if (!s || s->kind != symbol_kind::concept_name)
                throw parse_error(c.span_of(first),
                                  "'" + first.text + "' is not a concept name");
            return literal{atom::concept_app(*s, a1), positive};
        }
        term a1 = resolve_term(first, params);
        if (c.accept(tok::eq))
            return literal{atom::equality(a1, resolve_term(c.expect(tok::ident, "term"), params)),
                           positive};
        if (c.accept(tok::neq))
            return literal{atom::equality(a1, resolve_term(c.expect(tok::ident, "term"), params)),
                           !positive};
        throw parse_error(c.span_of(c.peek()), "expected '(' or '='/'!=' in literal");
    }

    term parse_update_term(const std::set<std::uint32_t>& params) {
        const token& t = c.expect(tok::ident, "term");
        return resolve_term(t, params);
    }
};

} // namespace

parsed_system parse_sas(const std::string& text, const std::string& filename, vocab& v,
                        const ontology& onto) {
    lexer lx(text, filename);
    auto toks = lx.run();
    cursor c{toks, filename};

    parsed_system out;
    out.system.onto = onto;
    sas_parser p{c, v, out.system, {}, {}};
    for (auto ind : onto.sig().individuals)
        p.const_ids.insert(ind);

    bool saw_vars = false, saw_init = false;
    while (c.peek().kind != tok::eof) {
        if (c.at_keyword("vars")) {
            c.next();
            do {
                const token& t = c.expect(tok::ident, "variable name");
                symbol s = intern_at(v, c, t, symbol_kind::variable);
                if (!p.var_ids.insert(s.id).second)
                    throw parse_error(c.span_of(t), "duplicate variable '" + t.text + "'");
                out.system.vars.push_back(s.id);
            } while (c.accept(tok::comma));
            c.expect(tok::semicolon, "';'");
            saw_vars = true;
        } else if (c.at_keyword("consts")) {
            c.next();
            do {
                const token& t = c.expect(tok::ident, "constant name");
                symbol s = intern_at(v, c, t, symbol_kind::individual);
                p.const_ids.insert(s.id);
                if (std::find(out.system.extra_constants.begin(),
                              out.system.extra_constants.end(),
                              s.id) == out.system.extra_constants.end())
                    out.system.extra_constants.push_back(s.id);
            } while (c.accept(tok::comma));
            c.expect(tok::semicolon, "';'");
        } else if (c.at_keyword("init")) {
            if (!saw_vars)
                throw parse_error(c.span_of(c.peek()), "'init' must follow 'vars'");
            c.next();
            do {
                const token& vt = c.expect(tok::ident, "variable name");
                auto vs = v.lookup(vt.text);
                if (!vs || vs->kind != symbol_kind::variable || !p.var_ids.count(vs->id))
                    throw parse_error(c.span_of(vt),
                                      "'" + vt.text + "' is not a declared variable");
                c.expect(tok::assign, "':='");
                const token& it = c.expect(tok::ident, "individual name");
                symbol is = intern_at(v, c, it, symbol_kind::individual);
                p.const_ids.insert(is.id);
                for (auto [var_id, ind] : out.system.init) {
                    (void)ind;
                    if (var_id == vs->id)
                        throw parse_error(c.span_of(vt),
                                          "variable '" + vt.text + "' initialised twice");
                }
                out.system.init.emplace_back(vs->id, is.id);
            } while (c.accept(tok::comma));
            c.expect(tok::semicolon, "';'");
            saw_init = true;
        } else if (c.at_keyword("transition")) {
            const token& kw = c.next();
            source_span span = c.span_of(kw);
            transition tr;
            const token& name = c.expect(tok::ident, "transition name");
            tr.name = name.text;
            std::set<std::uint32_t> params;
            if (c.at_keyword("params")) {
                c.next();
                do {
                    const token& t = c.expect(tok::ident, "parameter name");
                    symbol s = intern_at(v, c, t, symbol_kind::variable);
                    if (p.var_ids.count(s.id))
                        throw parse_error(c.span_of(t),
                                          "parameter shadows artifact variable '" + t.text + "'");
                    if (!params.insert(s.id).second)
                        throw parse_error(c.span_of(t), "duplicate parameter '" + t.text + "'");
                    tr.params.push_back(s.id);
                } while (c.accept(tok::comma));
            }
            c.expect(tok::colon, "':'");
            c.expect_keyword("guard");
            if (c.at_keyword("true")) {
                c.next();
            } else {
                tr.guard.push(p.parse_literal(params));
                while (c.accept(tok::amp))
                    tr.guard.push(p.parse_literal(params));
            }
            c.expect(tok::big_arrow, "'==>'");
            std::map<std::uint32_t, update> ups;
            if (c.peek().kind != tok::semicolon) {
                do {
                    const token& vt = c.expect(tok::ident, "variable name");
                    auto vs = v.lookup(vt.text);
                    if (!vs || vs->kind != symbol_kind::variable || !p.var_ids.count(vs->id))
                        throw parse_error(c.span_of(vt),
                                          "'" + vt.text + "' is not an artifact variable");
                    if (ups.count(vs->id))
                        throw parse_error(c.span_of(vt),
                                          "variable '" + vt.text + "' updated twice");
                    c.expect(tok::assign, "':='");
                    if (c.at_keyword("case")) {
                        c.next();
                        c.expect(tok::lbrace, "'{'");
                        case_function f;
                        f.name = tr.name + "." + vt.text;
                        do {
                            f.partition.cases.push_back(p.parse_literal(params));
                            c.expect(tok::small_arrow, "'->'");
                            f.branch_terms.push_back(p.parse_update_term(params));
                        } while (c.accept(tok::pipe));
                        c.expect(tok::rbrace, "'}'");
                        ups[vs->id] = update::cases(std::move(f));
                    } else {
                        ups[vs->id] = update::to(p.parse_update_term(params));
                    }
                } while (c.accept(tok::comma));
            }
            c.expect(tok::semicolon, "';'");
            // Total updates: omitted variables keep their value.
            for (auto var_id : out.system.vars) {
                auto it = ups.find(var_id);
                tr.updates.push_back(it == ups.end() ? update::identity(var_id)
                                                     : std::move(it->second));
            }
            out.system.transitions.push_back(std::move(tr));
            out.transition_spans.push_back(span);
        } else {
            throw parse_error(c.span_of(c.peek()),
                              "expected 'vars', 'init', 'consts' or 'transition'");
        }
    }
    if (!saw_vars)
        throw parse_error(source_span{filename, 1, 1, 1, 1}, "missing 'vars' declaration");
    if (!saw_init)
        throw parse_error(source_span{filename, 1, 1, 1, 1}, "missing 'init' declaration");
    std::set<std::uint32_t> initialised;
    for (auto [var_id, ind] : out.system.init) {
        (void)ind;
        initialised.insert(var_id);
    }
    for (auto var_id : out.system.vars)
        if (!initialised.count(var_id))
            throw parse_error(source_span{filename, 1, 1, 1, 1},
                              "variable '" + v.name(symbol{symbol_kind::variable, var_id}) +
                                  "' has no initial value");
    return out;
}

// -------------------------------------------------------------- printers

std::string print_onto(const ontology& o, const vocab& v) {
    std::string out;
    for (const auto& ax : o.tbox)
        out += to_string(ax, v) + "\n";
    for (const auto& a : o.abox)
        out += to_string(a, v) + "\n";
    return out;
}

std::string print_sas(const artifact_system& s, const vocab& v) {
    auto vname = [&](std::uint32_t id) { return v.name(symbol{symbol_kind::variable, id}); };
    auto iname = [&](std::uint32_t id) { return v.name(symbol{symbol_kind::individual, id}); };
    std::string out = "vars ";
    for (std::size_t i = 0; i < s.vars.size(); ++i)
        out += (i ? ", " : "") + vname(s.vars[i]);
    out += " ;\ninit ";
    for (std::size_t i = 0; i < s.init.size(); ++i)
        out += (i ? ", " : "") + vname(s.init[i].first) + " := " + iname(s.init[i].second);
    out += " ;\n";
    if (!s.extra_constants.empty()) {
        out += "consts ";
        for (std::size_t i = 0; i < s.extra_constants.size(); ++i)
            out += (i ? ", " : "") + iname(s.extra_constants[i]);
        out += " ;\n";
    }
    for (const auto& tr : s.transitions) {
        out += "transition " + tr.name;
        if (!tr.params.empty()) {
            out += " params ";
            for (std::size_t i = 0; i < tr.params.size(); ++i)
                out += (i ? ", " : "") + vname(tr.params[i]);
        }
        out += " : guard ";
        out += tr.guard.empty() ? "true" : to_string(tr.guard, v);
        out += " ==> ";
        std::string ups;
        for (std::size_t i = 0; i < s.vars.size(); ++i) {
            const update& u = tr.updates[i];
            if (!u.is_case && u.plain == term{true, s.vars[i]})
                continue; // identity stays implicit
            if (!ups.empty())
                ups += ", ";
            ups += vname(s.vars[i]) + " := ";
            if (!u.is_case) {
                ups += to_string(u.plain, v);
            } else {
                ups += "case { ";
                for (std::size_t k = 0; k < u.cf.partition.cases.size(); ++k) {
                    if (k)
                        ups += " | ";
                    ups += to_string(u.cf.partition.cases[k], v) + " -> " +
                           to_string(u.cf.branch_terms[k], v);
                }
                ups += " }";
            }
        }
        if (ups.empty())
            ups = vname(s.vars[0]) + " := " + vname(s.vars[0]);
        out += ups + " ;\n";
    }
    return out;
}

std::string print_formula(const qff& f, const vocab& v) {
    return to_string(f, v);
}

} // namespace oreach
