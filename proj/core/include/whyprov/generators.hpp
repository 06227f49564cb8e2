#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "whyprov/datalog.hpp"

namespace whyprov {

/// 3CNF formula; literal = (variable index 1..n, positive?).
struct Cnf3Formula {
    int num_vars = 0;
    std::vector<std::array<std::pair<int, bool>, 3>> clauses;
};

struct GeneratedInstance {
    Query query;
    Database db;
};

struct ReductionInstance {
    Query query;
    Database db;
    std::vector<Symbol> tuple;
};

/// Encodes a 3CNF formula as a linear Datalog instance whose full database
/// is an explanation of the goal tuple exactly when the formula is
/// satisfiable. Rules guess a value per variable, check that each guessed
/// value satisfies every clause mentioning it compatibly, and walk the
/// variable ordering to a terminal dummy constant.
ReductionInstance gen_3sat_instance(const Cnf3Formula& phi);

/// Transitive closure over a seeded random digraph (distinct non-loop arcs).
GeneratedInstance gen_transclosure(std::size_t nodes, std::size_t edges, std::uint64_t seed);

/// Profiles: "tiny-linear" (single recursive unary predicate over a small
/// edge relation) and "tiny-nonlinear" (binary closure with a non-linear
/// doubling rule). Deterministic per (profile, seed).
GeneratedInstance gen_random_instance(const std::string& profile, std::uint64_t seed);

Cnf3Formula gen_random_3cnf(int num_vars, int num_clauses, std::uint64_t seed);

/// Truth-table satisfiability; intended for small formulas.
bool brute_force_sat(const Cnf3Formula& phi);

}  // namespace whyprov
