#pragma once

#include <cstddef>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "whyprov/closure.hpp"
#include "whyprov/datalog.hpp"

namespace whyprov {

/// DIMACS-style literal: +v / -v, variables numbered from 1.
using Lit = int;
using Clause = std::vector<Lit>;

enum class AcyclicityStrategy { TransitiveClosure, VertexElimination };

enum class VarKind { Node, Hedge, Edge, Aux };

struct VarInfo {
    VarKind kind;
    std::string description;
};

/// Bidirectional map between CNF variables and what they stand for:
///  - a node var per closure fact (the fact is selected),
///  - a hyperedge var per closure hyperedge (the edge triggers its head),
///  - an edge var per distinct (head, body member) pair,
///  - auxiliary vars from the acyclicity encoding.
/// Ids are dense 1..num_vars, assigned nodes first, then hyperedges, then
/// edges, then auxiliaries, each family in sorted textual order.
class VarMap {
  public:
    int node_var(const Fact& f) const;
    int hedge_var(std::size_t closure_edge) const { return hedge_vars_.at(closure_edge); }
    int edge_var(const Fact& head, const Fact& tail) const;
    bool has_edge_var(const Fact& head, const Fact& tail) const;

    int num_vars() const { return static_cast<int>(info_.size()); }
    /// 1-based; info(v) describes variable v.
    const VarInfo& info(int var) const { return info_[static_cast<std::size_t>(var) - 1]; }

    const std::unordered_map<Fact, int, FactHash>& node_vars() const { return node_vars_; }
    /// Edge vars as (head, tail, var) triples, in id order.
    const std::vector<std::tuple<Fact, Fact, int>>& edge_var_list() const { return edge_list_; }

  private:
    friend struct EncoderBuilder;
    std::unordered_map<Fact, int, FactHash> node_vars_;
    std::unordered_map<std::size_t, int> hedge_vars_;  // closure hyperedge id -> var
    std::unordered_map<Fact, std::unordered_map<Fact, int, FactHash>, FactHash> edge_vars_;
    std::vector<std::tuple<Fact, Fact, int>> edge_list_;
    std::vector<VarInfo> info_;
};

struct CnfInstance {
    std::vector<Clause> clauses;
    VarMap var_map;
    /// Node vars whose fact lies in the input database (candidate leaves).
    std::vector<int> db_leaf_vars;
};

struct EncoderLimits {
    std::size_t max_clauses = 50'000'000;
};

/// Compiles a downward closure into CNF. Models correspond exactly to the
/// rooted acyclic derivation subgraphs of the closure in which every selected
/// derived fact is justified by exactly one hyperedge.
CnfInstance encode(const DownwardClosure& dc, const Program& p, const Database& db,
                   AcyclicityStrategy strategy, const EncoderLimits& limits = {});

/// Arc for the acyclicity encoders: (from node, to node, selection var).
struct Arc {
    std::size_t from;
    std::size_t to;
    Lit var;
};

/// Transitive-closure acyclicity: reachability vars t(a,b) over all ordered
/// node pairs, with (arc => t), (arc /\ t => t) chaining, and no t(a,a).
std::vector<Clause> encode_acyclicity_tc(const std::vector<Arc>& arcs, std::size_t num_nodes,
                                         int& next_var, std::vector<VarInfo>& aux_info);

/// Vertex-elimination acyclicity: eliminate nodes in `order` (a permutation
/// of 0..num_nodes-1), adding shortcut arcs with fresh vars; a cycle shows up
/// as a two-cycle through the eliminated vertex and is forbidden by a binary
/// clause. Far fewer clauses than the transitive closure on sparse graphs.
std::vector<Clause> encode_acyclicity_ve(const std::vector<Arc>& arcs, std::size_t num_nodes,
                                         const std::vector<std::size_t>& order, int& next_var,
                                         std::vector<VarInfo>& aux_info);

/// Min-degree greedy elimination order over the undirected skeleton.
std::vector<std::size_t> min_degree_order(const std::vector<Arc>& arcs, std::size_t num_nodes);

/// `p cnf <vars> <clauses>` followed by one 0-terminated clause per line.
std::string to_dimacs(const CnfInstance& cnf);

/// Sidecar map, one `var <id> node|hedge|edge|aux <description>` per line.
std::string var_map_text(const CnfInstance& cnf);

}  // namespace whyprov
