#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "whyprov/symbols.hpp"

namespace whyprov {

/// A term is either a constant or a variable. Constants and variables live in
/// disjoint namespaces even when they share a spelling.
struct Term {
    enum class Kind { Constant, Variable };
    Kind kind;
    Symbol sym;

    static Term constant(Symbol s) { return {Kind::Constant, s}; }
    static Term variable(Symbol s) { return {Kind::Variable, s}; }
    bool is_constant() const { return kind == Kind::Constant; }
    bool is_variable() const { return kind == Kind::Variable; }

    friend bool operator==(const Term&, const Term&) = default;
    friend auto operator<=>(const Term&, const Term&) = default;
};

struct Atom {
    Symbol predicate;
    std::vector<Term> args;

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// A ground atom.
struct Fact {
    Symbol predicate;
    std::vector<Symbol> args;

    friend bool operator==(const Fact&, const Fact&) = default;

    /// Deterministic textual order, independent of interning order.
    std::string to_string() const;
};

bool fact_less(const Fact& a, const Fact& b);

struct FactHash {
    std::size_t operator()(const Fact& f) const {
        std::size_t h = std::hash<Symbol>{}(f.predicate);
        for (Symbol s : f.args) h = h * 1000003u + s;
        return h;
    }
};

using FactSet = std::unordered_set<Fact, FactHash>;

struct Rule {
    Atom head;
    std::vector<Atom> body;  // nonempty
};

class Program {
  public:
    /// Builds the derived structure (EDB/IDB split, arities, predicate graph)
    /// and checks safety and arity consistency.
    explicit Program(std::vector<Rule> rules);

    const std::vector<Rule>& rules() const { return rules_; }
    const std::set<Symbol>& edb() const { return edb_; }
    const std::set<Symbol>& idb() const { return idb_; }
    bool is_idb(Symbol pred) const { return idb_.count(pred) != 0; }
    std::size_t arity(Symbol pred) const;
    bool has_predicate(Symbol pred) const { return arities_.count(pred) != 0; }

    /// Edge R -> P iff R occurs in the body of a rule with head P.
    const std::map<Symbol, std::set<Symbol>>& predicate_graph() const { return graph_; }

    std::string render() const;

  private:
    std::vector<Rule> rules_;
    std::set<Symbol> edb_;
    std::set<Symbol> idb_;
    std::map<Symbol, std::size_t> arities_;
    std::map<Symbol, std::set<Symbol>> graph_;
};

class Database {
  public:
    Database() = default;
    explicit Database(std::vector<Fact> facts);

    bool insert(const Fact& f);  // false if duplicate
    bool contains(const Fact& f) const { return set_.count(f) != 0; }
    const std::vector<Fact>& facts() const { return facts_; }
    std::size_t size() const { return facts_.size(); }
    bool empty() const { return facts_.empty(); }

    /// Constants appearing in the stored facts.
    std::set<Symbol> active_domain() const;

  private:
    std::vector<Fact> facts_;
    FactSet set_;
};

struct Query {
    Program program;
    Symbol answer_predicate;  // must be in program.idb()
};

struct Classification {
    bool is_linear;
    bool is_nonrecursive;
};

Program parse_program(const std::string& text);

/// One fact per line, `pred(c1,...,ck)`. Facts over IDB predicates are
/// rejected when loading an input database.
Database parse_database(const std::string& text, const Program& schema);

Classification classify(const Program& p);

std::string render_fact(const Fact& f);
std::string render_atom(const Atom& a);

/// Canonical sorted rendering of a fact set, e.g. `{S(a), T(a,a,d)}`.
std::string render_fact_set(const std::vector<Fact>& facts);

}  // namespace whyprov
