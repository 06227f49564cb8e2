#include "whyprov/datalog.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "whyprov/errors.hpp"

namespace whyprov {

std::string render_fact(const Fact& f) {
    std::string out = symbol_name(f.predicate);
    out += '(';
    for (std::size_t i = 0; i < f.args.size(); ++i) {
        if (i) out += ',';
        out += symbol_name(f.args[i]);
    }
    out += ')';
    return out;
}

std::string Fact::to_string() const { return render_fact(*this); }

bool fact_less(const Fact& a, const Fact& b) {
    if (a.predicate != b.predicate) {
        int c = symbol_name(a.predicate).compare(symbol_name(b.predicate));
        if (c != 0) return c < 0;
    }
    if (a.args.size() != b.args.size()) return a.args.size() < b.args.size();
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (a.args[i] != b.args[i]) {
            return symbol_name(a.args[i]) < symbol_name(b.args[i]);
        }
    }
    return false;
}

std::string render_atom(const Atom& a) {
    std::string out = symbol_name(a.predicate);
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ',';
        const Term& t = a.args[i];
        if (t.is_constant()) {
            out += '"';
            out += symbol_name(t.sym);
            out += '"';
        } else {
            out += symbol_name(t.sym);
        }
    }
    out += ')';
    return out;
}

std::string render_fact_set(const std::vector<Fact>& facts) {
    std::vector<Fact> sorted = facts;
    std::sort(sorted.begin(), sorted.end(), fact_less);
    std::string out = "{";
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i) out += ", ";
        out += render_fact(sorted[i]);
    }
    out += '}';
    return out;
}

// ---------------------------------------------------------------------------
// Program

Program::Program(std::vector<Rule> rules) : rules_(std::move(rules)) {
    for (const Rule& r : rules_) idb_.insert(r.head.predicate);

    auto note_arity = [this](Symbol pred, std::size_t n) {
        auto [it, fresh] = arities_.emplace(pred, n);
        if (!fresh && it->second != n) throw ArityMismatch(symbol_name(pred));
    };

    for (std::size_t i = 0; i < rules_.size(); ++i) {
        const Rule& r = rules_[i];
        note_arity(r.head.predicate, r.head.args.size());
        std::set<Symbol> body_vars;
        for (const Atom& a : r.body) {
            note_arity(a.predicate, a.args.size());
            if (!idb_.count(a.predicate)) edb_.insert(a.predicate);
            graph_[a.predicate].insert(r.head.predicate);
            for (const Term& t : a.args) {
                if (t.is_variable()) body_vars.insert(t.sym);
            }
        }
        for (const Term& t : r.head.args) {
            if (t.is_variable() && !body_vars.count(t.sym)) {
                throw SafetyViolation(static_cast<int>(i), symbol_name(t.sym));
            }
        }
    }
}

std::size_t Program::arity(Symbol pred) const {
    auto it = arities_.find(pred);
    if (it == arities_.end()) throw UnknownPredicate(symbol_name(pred));
    return it->second;
}

std::string Program::render() const {
    std::string out;
    for (const Rule& r : rules_) {
        out += render_atom(r.head);
        out += " :- ";
        for (std::size_t i = 0; i < r.body.size(); ++i) {
            if (i) out += ", ";
            out += render_atom(r.body[i]);
        }
        out += ".\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Database

Database::Database(std::vector<Fact> facts) {
    for (Fact& f : facts) insert(f);
}

bool Database::insert(const Fact& f) {
    if (!set_.insert(f).second) return false;
    facts_.push_back(f);
    return true;
}

std::set<Symbol> Database::active_domain() const {
    std::set<Symbol> dom;
    for (const Fact& f : facts_) dom.insert(f.args.begin(), f.args.end());
    return dom;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Lexer {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    explicit Lexer(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(line, col, what); }

    void bump() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skip_ws_and_comments() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == '%') {
                while (pos < text.size() && text[pos] != '\n') bump();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
    }

    bool at_end() {
        skip_ws_and_comments();
        return pos >= text.size();
    }

    char peek() const { return pos < text.size() ? text[pos] : '\0'; }

    void expect(char c) {
        skip_ws_and_comments();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        bump();
    }

    bool accept(char c) {
        skip_ws_and_comments();
        if (peek() != c) return false;
        bump();
        return true;
    }

    static bool ident_start(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool ident_char(char c) { return ident_start(c); }

    std::string identifier() {
        skip_ws_and_comments();
        if (!ident_start(peek())) fail("expected identifier");
        std::string out;
        while (pos < text.size() && ident_char(text[pos])) {
            out += text[pos];
            bump();
        }
        return out;
    }

    std::string quoted() {
        expect('"');
        std::string out;
        while (pos < text.size() && text[pos] != '"') {
            out += text[pos];
            bump();
        }
        if (pos >= text.size()) fail("unterminated string");
        bump();  // closing quote
        return out;
    }

    // In rule position: bare identifiers are variables, quoted strings are
    // constants. In fact position everything is a constant.
    Term term(bool in_rule) {
        skip_ws_and_comments();
        if (peek() == '"') return Term::constant(intern(quoted()));
        std::string name = identifier();
        if (in_rule) return Term::variable(intern(name));
        return Term::constant(intern(name));
    }

    Atom atom(bool in_rule) {
        std::string pred = identifier();
        Atom a{intern(pred), {}};
        expect('(');
        if (!accept(')')) {
            do {
                a.args.push_back(term(in_rule));
            } while (accept(','));
            expect(')');
        }
        return a;
    }
};

}  // namespace

Program parse_program(const std::string& text) {
    Lexer lex(text);
    std::vector<Rule> rules;
    while (!lex.at_end()) {
        Rule r;
        r.head = lex.atom(/*in_rule=*/true);
        lex.skip_ws_and_comments();
        if (lex.peek() != ':') lex.fail("expected ':-'");
        lex.bump();
        if (lex.peek() != '-') lex.fail("expected ':-'");
        lex.bump();
        do {
            r.body.push_back(lex.atom(/*in_rule=*/true));
        } while (lex.accept(','));
        lex.expect('.');
        rules.push_back(std::move(r));
    }
    return Program(std::move(rules));
}

Database parse_database(const std::string& text, const Program& schema) {
    Lexer lex(text);
    Database db;
    while (!lex.at_end()) {
        Atom a = lex.atom(/*in_rule=*/false);
        if (!schema.has_predicate(a.predicate)) throw UnknownPredicate(symbol_name(a.predicate));
        if (schema.is_idb(a.predicate)) throw IdbFactInInput(symbol_name(a.predicate));
        if (schema.arity(a.predicate) != a.args.size()) {
            throw ArityMismatch(symbol_name(a.predicate));
        }
        Fact f{a.predicate, {}};
        f.args.reserve(a.args.size());
        for (const Term& t : a.args) f.args.push_back(t.sym);
        db.insert(f);
    }
    return db;
}

// ---------------------------------------------------------------------------
// Classification

Classification classify(const Program& p) {
    bool linear = true;
    for (const Rule& r : p.rules()) {
        int idb_atoms = 0;
        for (const Atom& a : r.body) {
            if (p.is_idb(a.predicate)) ++idb_atoms;
        }
        if (idb_atoms > 1) {
            linear = false;
            break;
        }
    }

    // Cycle detection on the predicate graph.
    enum class Mark { White, Grey, Black };
    std::map<Symbol, Mark> mark;
    bool acyclic = true;
    std::function<void(Symbol)> visit = [&](Symbol v) {
        mark[v] = Mark::Grey;
        auto it = p.predicate_graph().find(v);
        if (it != p.predicate_graph().end()) {
            for (Symbol w : it->second) {
                Mark m = mark.count(w) ? mark[w] : Mark::White;
                if (m == Mark::Grey) acyclic = false;
                if (m == Mark::White) visit(w);
                if (!acyclic) return;
            }
        }
        mark[v] = Mark::Black;
    };
    for (const auto& [v, _] : p.predicate_graph()) {
        if (!mark.count(v)) visit(v);
        if (!acyclic) break;
    }
    return {linear, acyclic};
}

}  // namespace whyprov
