#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "whyprov/generators.hpp"
#include "whyprov/provenance.hpp"

namespace whyprov {

struct SweepMismatch {
    std::uint64_t seed = 0;
    std::string detail;
};

struct SweepReport {
    std::size_t instances = 0;
    std::size_t comparisons = 0;
    std::size_t skipped = 0;  // beyond oracle reach
    std::vector<SweepMismatch> mismatches;
    double total_seconds = 0.0;

    bool passed() const { return mismatches.empty(); }
    std::string to_json() const;
};

/// Differential sweep: for random instances and each answer tuple, the
/// CNF-based enumeration (under both acyclicity strategies) must produce the
/// same explanation family as the exhaustive oracle. Instances beyond the
/// oracle's caps count as skipped.
SweepReport sweep_unwhy(const std::vector<std::string>& profiles, std::size_t n_instances,
                        std::uint64_t seed);

/// Differential sweep over random tiny 3CNF formulas: truth-table
/// satisfiability must coincide with full-database membership in the
/// arbitrary-tree explanation family of the reduction instance.
SweepReport sweep_reduction(std::size_t n_formulas, std::uint64_t seed);

}  // namespace whyprov
