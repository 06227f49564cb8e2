#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "whyprov/encoder.hpp"

namespace whyprov {

enum class SolveResult { Sat, Unsat, Timeout };

/// Conflict-driven clause learning solver: two watched literals, first-UIP
/// learning, Luby restarts. Deterministic: identical clause sequences yield
/// identical models. Clauses may be added between solve() calls.
class Solver {
  public:
    struct Limits {
        std::uint64_t max_conflicts = 0;  // 0 = unbounded
        double max_seconds = 0.0;         // 0 = unbounded
    };

    struct Stats {
        std::uint64_t decisions = 0;
        std::uint64_t conflicts = 0;
        std::uint64_t propagations = 0;
        std::uint64_t restarts = 0;
    };

    explicit Solver(int num_vars = 0) { ensure_vars(num_vars); }

    void ensure_vars(int num_vars);
    int num_vars() const { return static_cast<int>(activity_.size()); }

    /// Duplicate literals are merged; tautologies are dropped. An empty
    /// clause marks the instance trivially unsatisfiable.
    void add_clause(const Clause& lits);
    bool trivially_unsat() const { return trivially_unsat_; }

    SolveResult solve(const Limits& limits);
    SolveResult solve() { return solve(Limits{}); }

    /// Valid after solve() returned Sat; total over declared variables.
    bool value(int var) const { return model_[static_cast<std::size_t>(var)]; }
    std::vector<bool> model() const { return model_; }

    const Stats& stats() const { return stats_; }

  private:
    // Literal encoding: variable v (0-based) -> 2v (positive), 2v+1 (negated).
    static int encode(Lit l) {
        int v = l > 0 ? l : -l;
        return 2 * (v - 1) + (l < 0 ? 1 : 0);
    }

    struct Watch {
        std::uint32_t clause;
        int blocker;
    };

    bool enqueue(int lit, std::int32_t reason);
    std::int32_t propagate();
    void analyze(std::int32_t conflict, std::vector<int>& learnt, int& backtrack_level);
    void cancel_until(int level);
    int pick_branch();
    void attach(std::uint32_t ci);
    void bump(int var);

    std::vector<std::vector<int>> clauses_;
    std::vector<std::vector<Watch>> watches_;  // per encoded literal
    std::vector<std::int8_t> assign_;          // per var: 1 true, -1 false, 0 unset
    std::vector<std::int32_t> reason_;         // clause index, -1 for decisions
    std::vector<int> level_;
    std::vector<int> trail_;
    std::vector<int> trail_lim_;
    std::size_t qhead_ = 0;
    std::vector<double> activity_;
    double activity_inc_ = 1.0;
    std::vector<int> pending_units_;
    bool trivially_unsat_ = false;
    std::vector<bool> model_;
    Stats stats_;
};

/// Checks a model against a clause set, independently of the solver.
bool satisfies(const std::vector<Clause>& clauses, const std::vector<bool>& model);

struct DimacsInstance {
    int num_vars = 0;
    std::vector<Clause> clauses;
};

DimacsInstance parse_dimacs(const std::string& text);
std::string to_dimacs(const DimacsInstance& instance);

struct ExternalSolveResult {
    SolveResult status;
    std::vector<bool> model;  // indexed 1..num_vars when status == Sat
};

/// Writes the instance to a temporary DIMACS file and runs
/// `command <file>`. Exit code 10 means satisfiable (model taken from the
/// `v` lines), 20 unsatisfiable; anything else raises SolverTimeout.
ExternalSolveResult run_external_solver(const std::string& command,
                                        const DimacsInstance& instance);

}  // namespace whyprov
