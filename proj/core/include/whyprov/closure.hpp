#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "whyprov/datalog.hpp"
#include "whyprov/engine.hpp"

namespace whyprov {

/// One rule instance: head fact plus its body facts as a canonical
/// (sorted, duplicate-free) set.
struct Hyperedge {
    Fact head;
    std::vector<Fact> body;  // sorted by fact_less, no duplicates

    friend bool operator==(const Hyperedge&, const Hyperedge&) = default;
};

/// Hypergraph of rule instances: nodes are facts, hyperedges are rule
/// instantiations. Keeps, per hyperedge, the trigger (rule index and
/// homomorphism) used when unravelling; when several instantiations collapse
/// onto one hyperedge the lowest rule index, then the lexicographically
/// smallest homomorphism, wins.
class Hypergraph {
  public:
    std::size_t add_node(const Fact& f);
    bool has_node(const Fact& f) const { return node_ids_.count(f) != 0; }
    std::size_t node_id(const Fact& f) const;

    /// Returns false if an equal hyperedge was already present (the trigger
    /// is then reconciled to the smaller one).
    bool add_hyperedge(const Fact& head, std::vector<Fact> body, std::size_t rule_index,
                       std::vector<std::pair<Symbol, Symbol>> homomorphism);

    const std::vector<Fact>& nodes() const { return nodes_; }
    const std::vector<Hyperedge>& hyperedges() const { return edges_; }
    const std::vector<std::size_t>& edges_with_head(const Fact& f) const;
    std::size_t edge_rule(std::size_t edge) const { return triggers_[edge].first; }
    const std::vector<std::pair<Symbol, Symbol>>& edge_homomorphism(std::size_t edge) const {
        return triggers_[edge].second;
    }

    /// One line per hyperedge, `head <- f1, f2, ...`, sorted.
    std::string export_text() const;

  private:
    std::vector<Fact> nodes_;
    std::unordered_map<Fact, std::size_t, FactHash> node_ids_;
    std::vector<Hyperedge> edges_;
    std::vector<std::pair<std::size_t, std::vector<std::pair<Symbol, Symbol>>>> triggers_;
    std::unordered_map<Fact, std::vector<std::size_t>, FactHash> by_head_;
};

struct DownwardClosure {
    Hypergraph graph;
    Fact goal;

    /// Input-database facts that are nodes of the closure, sorted.
    std::vector<Fact> db_leaves(const Database& db) const;
};

/// Nodes are the fixpoint facts; one hyperedge per recorded instantiation,
/// body treated as a set.
Hypergraph build_gri(const Program& p, const Database& db, const FixpointResult& fix);

/// Forward traversal from the goal over hyperedges (head to body members).
/// Keeps only hyperedges whose head and body lie within the reachable set.
/// Throws GoalNotDerivable if the goal is not a GRI node.
DownwardClosure downward_closure(const Hypergraph& gri, const Fact& goal);

}  // namespace whyprov
