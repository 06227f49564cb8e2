#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "whyprov/closure.hpp"
#include "whyprov/datalog.hpp"
#include "whyprov/engine.hpp"

namespace whyprov {

/// Labeled rooted tree witnessing a derivation. Nodes are indices into a
/// flat vector; node 0 is the root.
struct ProofTree {
    struct Node {
        Fact label;
        std::vector<std::size_t> children;
    };
    std::vector<Node> nodes;

    std::size_t add_node(const Fact& label) {
        nodes.push_back({label, {}});
        return nodes.size() - 1;
    }
    std::size_t depth() const;
    std::string to_dot() const;
};

/// Labeled rooted DAG; each node's outgoing edges come from one rule
/// instantiation.
struct ProofDag {
    struct Node {
        Fact label;
        std::vector<std::size_t> children;
    };
    std::vector<Node> nodes;
    std::size_t root = 0;

    std::string to_dot() const;
};

/// DAG with at most one node per fact. Internal nodes carry the trigger
/// (rule index + homomorphism) that justifies their outgoing edges.
struct CompressedDag {
    struct Trigger {
        std::vector<Fact> children;  // canonical sorted set
        std::size_t rule_index;
        std::vector<std::pair<Symbol, Symbol>> homomorphism;
    };
    Fact root;
    std::vector<Fact> nodes;
    std::unordered_map<Fact, Trigger, FactHash> triggers;  // absent for leaves

    /// Leaves, sorted.
    std::vector<Fact> support() const;
};

/// A member of a why-provenance family: a sorted, duplicate-free fact list.
using Support = std::vector<Fact>;

struct SupportLess {
    bool operator()(const Support& a, const Support& b) const;
};

using SupportFamily = std::set<Support, SupportLess>;

Support make_support(std::vector<Fact> facts);

struct OracleLimits {
    std::size_t max_closure_nodes = 64;
    std::size_t max_family = 100'000;
    std::size_t max_search_steps = 5'000'000;
};

// --- predicates over trees -------------------------------------------------

/// All three proof-tree conditions for (goal, db, p).
bool validate_tree(const ProofTree& t, const Program& p, const Database& db, const Fact& goal);

Support support(const ProofTree& t);
Support support(const ProofDag& g);

/// Equal-labeled nodes have isomorphic subtrees (canonical-form check).
bool is_unambiguous(const ProofTree& t);

/// No ancestor-descendant pair shares a label.
bool is_nonrecursive_tree(const ProofTree& t);

/// depth(t) == rank of the root fact. Throws GoalNotDerivable if the root
/// fact is not in the fixpoint.
bool is_minimal_depth_tree(const ProofTree& t, const FixpointResult& fix);

// --- unravelling -----------------------------------------------------------

ProofTree unravel(const ProofDag& g);

/// Expands each internal node via its trigger: one child per body atom of
/// the triggering rule, so duplicates reappear in the tree.
ProofTree unravel(const CompressedDag& g, const Program& p);

/// Structural check: rooted, acyclic, leaves in db, each internal node's
/// edge set matches its trigger's instantiation.
bool is_valid_compressed_dag(const CompressedDag& g, const Program& p, const Database& db);

// --- exhaustive oracles ----------------------------------------------------

struct UnwhyOracleResult {
    SupportFamily supports;
    /// One witnessing compressed DAG per support.
    std::vector<std::pair<Support, CompressedDag>> witnesses;
};

/// Exact why-provenance relative to unambiguous proof trees, by exhaustive
/// search over hyperedge choices in the downward closure.
UnwhyOracleResult oracle_unwhy(const Query& q, const Database& db,
                               const std::vector<Symbol>& tuple, const OracleLimits& limits = {});

/// Exact why-provenance (arbitrary proof trees), as a least fixpoint of
/// set-of-supports families over the downward closure.
SupportFamily oracle_why(const Query& q, const Database& db, const std::vector<Symbol>& tuple,
                         const OracleLimits& limits = {});

/// Smallest proof-tree depth of `goal`, found by iterative deepening over
/// the GRI hyperedges; nullopt if none exists within `max_depth`.
std::optional<std::size_t> minimal_tree_depth(const Hypergraph& gri, const Database& db,
                                              const Fact& goal, std::size_t max_depth);

}  // namespace whyprov
