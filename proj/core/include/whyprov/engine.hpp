#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "whyprov/datalog.hpp"

namespace whyprov {

/// A satisfied rule instantiation: rule index plus the homomorphism that
/// grounds it, together with the resulting head and body facts.
struct Instantiation {
    std::size_t rule_index;
    std::vector<std::pair<Symbol, Symbol>> homomorphism;  // (variable, constant), sorted by variable name
    Fact head;
    std::vector<Fact> body;  // one entry per body atom, in rule order
};

struct EngineLimits {
    std::size_t max_facts = 10'000'000;
    // 0 means "use the |base(D,Sigma)| bound".
    std::size_t max_iterations = 0;
};

struct FixpointResult {
    Database facts;
    std::unordered_map<Fact, std::size_t, FactHash> rank;
    std::vector<Instantiation> instantiations;

    std::size_t rank_of(const Fact& f) const;
    bool derives(const Fact& f) const { return facts.contains(f); }
};

/// Number of facts formable over sch(p) and adom(db), saturating.
std::size_t base_size(const Program& p, const Database& db);

/// One application of the immediate consequence operator; monotone.
Database immediate_consequence(const Program& p, const Database& db);

/// Semi-naive evaluation to the least fixpoint. rank maps each fact to the
/// first iteration that produced it (0 for input facts). The instantiation
/// log records every rule firing over the final fixpoint, not just first
/// derivations.
FixpointResult fixpoint(const Program& p, const Database& db, const EngineLimits& limits = {});

std::vector<std::vector<Symbol>> answers(const Query& q, const Database& db);

}  // namespace whyprov
