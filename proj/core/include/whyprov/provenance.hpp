#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "whyprov/encoder.hpp"
#include "whyprov/prooftree.hpp"
#include "whyprov/satcore.hpp"

namespace whyprov {

struct ProvenanceMember {
    Support facts;
    std::size_t ordinal = 0;
    std::optional<CompressedDag> witness;
    double delay_seconds = 0.0;  // time since the previous member
};

enum class EnumerationStatus { Exhausted, LimitReached, Timeout };

struct EnumerateOptions {
    AcyclicityStrategy strategy = AcyclicityStrategy::VertexElimination;
    std::size_t max_members = 0;  // 0 = unlimited
    double max_seconds = 0.0;     // 0 = unlimited
    bool decode_witnesses = false;
    Solver::Limits solver_limits;
    EncoderLimits encoder_limits;
};

struct EnumerationResult {
    std::vector<ProvenanceMember> members;
    EnumerationStatus status = EnumerationStatus::Exhausted;
    double total_seconds = 0.0;
    double fixpoint_seconds = 0.0;
    double closure_seconds = 0.0;
    double encode_seconds = 0.0;
};

/// Enumerates the explanation family of `tuple`: each member is the set of
/// input-database facts used by some unambiguous derivation of the goal.
/// After each member a blocking clause over the candidate-leaf variables is
/// added, so members are pairwise distinct; on UNSAT the family is complete.
EnumerationResult enumerate(const Query& q, const Database& db, const std::vector<Symbol>& tuple,
                            const EnumerateOptions& opts = {});

/// Same contract as enumerate(), but each model is found by an external
/// DIMACS solver invoked as `command <file>`; blocking clauses accumulate in
/// the exported instance between calls.
EnumerationResult enumerate_external(const Query& q, const Database& db,
                                     const std::vector<Symbol>& tuple, const std::string& command,
                                     const EnumerateOptions& opts = {});

/// True iff `d_sub` (a subset of `db`) is exactly the leaf set of some
/// unambiguous derivation of the goal. Facts of d_sub outside the goal's
/// closure can never be leaves, so they force false.
bool check_membership(const Query& q, const Database& db, const std::vector<Symbol>& tuple,
                      const Database& d_sub,
                      AcyclicityStrategy strategy = AcyclicityStrategy::VertexElimination);

/// Input-database facts whose node variable is true in the model.
Support db_of_assignment(const std::vector<bool>& model, const VarMap& vm, const Database& db);

/// Reads the selected subgraph (node, hyperedge vars) out of a model.
CompressedDag decode_witness(const std::vector<bool>& model, const VarMap& vm,
                             const DownwardClosure& dc, const Program& p);

/// One member per line, facts sorted and semicolon-separated.
std::string render_members(const std::vector<ProvenanceMember>& members);

}  // namespace whyprov
