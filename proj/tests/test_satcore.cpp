#include <doctest.h>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "whyprov/errors.hpp"
#include "whyprov/satcore.hpp"

using namespace whyprov;

namespace {

/// Exhaustive satisfiability check for small variable counts.
bool truth_table_sat(int num_vars, const std::vector<Clause>& clauses) {
    for (std::uint32_t mask = 0; mask < (1u << num_vars); ++mask) {
        std::vector<bool> model(static_cast<std::size_t>(num_vars) + 1);
        for (int v = 1; v <= num_vars; ++v) model[static_cast<std::size_t>(v)] = (mask >> (v - 1)) & 1;
        if (satisfies(clauses, model)) return true;
    }
    return false;
}

/// num_pigeons into num_pigeons - 1 holes: unsatisfiable by counting.
std::vector<Clause> pigeonhole(int num_pigeons) {
    int holes = num_pigeons - 1;
    auto var = [&](int p, int h) { return p * holes + h + 1; };
    std::vector<Clause> clauses;
    for (int p = 0; p < num_pigeons; ++p) {
        Clause c;
        for (int h = 0; h < holes; ++h) c.push_back(var(p, h));
        clauses.push_back(c);
    }
    for (int h = 0; h < holes; ++h)
        for (int p = 0; p < num_pigeons; ++p)
            for (int q = p + 1; q < num_pigeons; ++q)
                clauses.push_back({-var(p, h), -var(q, h)});
    return clauses;
}

std::string write_script(const char* name, const std::string& body) {
    std::string path = std::string("/tmp/") + name;
    std::ofstream out(path);
    out << "#!/bin/sh\n" << body;
    out.close();
    int rc = std::system(("chmod +x " + path).c_str());
    REQUIRE(rc == 0);
    return path;
}

}  // namespace

TEST_CASE("solver agrees with a truth table on random small formulas") {
    std::mt19937_64 rng(77);
    int sat_seen = 0;
    int unsat_seen = 0;
    for (int round = 0; round < 500; ++round) {
        int num_vars = 3 + static_cast<int>(rng() % 6);  // 3..8
        int num_clauses = 2 + static_cast<int>(rng() % 30);
        std::vector<Clause> clauses;
        for (int i = 0; i < num_clauses; ++i) {
            Clause c;
            int width = 1 + static_cast<int>(rng() % 3);
            for (int k = 0; k < width; ++k) {
                int v = 1 + static_cast<int>(rng() % num_vars);
                c.push_back(rng() & 1 ? v : -v);
            }
            clauses.push_back(c);
        }
        Solver solver(num_vars);
        for (const Clause& c : clauses) solver.add_clause(c);
        SolveResult result = solver.solve();
        bool expected = truth_table_sat(num_vars, clauses);
        CHECK(result == (expected ? SolveResult::Sat : SolveResult::Unsat));
        if (expected) {
            CHECK(satisfies(clauses, solver.model()));
            ++sat_seen;
        } else {
            ++unsat_seen;
        }
    }
    // The mix must exercise both branches.
    CHECK(sat_seen > 50);
    CHECK(unsat_seen > 50);
}

TEST_CASE("pigeonhole instances are refuted") {
    for (int pigeons : {2, 3, 4, 5, 6}) {
        Solver solver;
        for (const Clause& c : pigeonhole(pigeons)) solver.add_clause(c);
        CHECK(solver.solve() == SolveResult::Unsat);
    }
}

TEST_CASE("unit clauses propagate, the empty clause poisons the instance") {
    Solver solver(2);
    solver.add_clause({1});
    solver.add_clause({-1, 2});
    REQUIRE(solver.solve() == SolveResult::Sat);
    CHECK(solver.value(1));
    CHECK(solver.value(2));

    solver.add_clause({});
    CHECK(solver.trivially_unsat());
    CHECK(solver.solve() == SolveResult::Unsat);
}

TEST_CASE("clauses added between solves are honored") {
    Solver solver(3);
    solver.add_clause({1, 2});
    REQUIRE(solver.solve() == SolveResult::Sat);

    // Block the model we just got, three times over; only 3 models exist.
    int models = 0;
    while (solver.solve() == SolveResult::Sat) {
        ++models;
        REQUIRE(models <= 3);
        Clause blocking;
        for (int v : {1, 2}) blocking.push_back(solver.value(v) ? -v : v);
        solver.add_clause(blocking);
    }
    CHECK(models == 3);
}

TEST_CASE("solver is deterministic across runs") {
    std::mt19937_64 rng(909);
    std::vector<Clause> clauses;
    for (int i = 0; i < 150; ++i) {
        Clause c;
        for (int k = 0; k < 3; ++k) {
            int v = 1 + static_cast<int>(rng() % 30);
            c.push_back(rng() & 1 ? v : -v);
        }
        clauses.push_back(c);
    }
    Solver a(30), b(30);
    for (const Clause& c : clauses) {
        a.add_clause(c);
        b.add_clause(c);
    }
    REQUIRE(a.solve() == b.solve());
    if (a.solve() == SolveResult::Sat) CHECK(a.model() == b.model());
}

TEST_CASE("satisfiable 50-variable formulas yield checked models") {
    std::mt19937_64 rng(31337);
    for (int round = 0; round < 20; ++round) {
        // Plant a solution so the instance is satisfiable by construction.
        std::vector<bool> planted(51);
        for (int v = 1; v <= 50; ++v) planted[static_cast<std::size_t>(v)] = rng() & 1;
        std::vector<Clause> clauses;
        for (int i = 0; i < 180; ++i) {
            Clause c;
            do {
                c.clear();
                for (int k = 0; k < 3; ++k) {
                    int v = 1 + static_cast<int>(rng() % 50);
                    c.push_back(rng() & 1 ? v : -v);
                }
            } while (!satisfies({c}, planted));
            clauses.push_back(c);
        }
        Solver solver(50);
        for (const Clause& c : clauses) solver.add_clause(c);
        REQUIRE(solver.solve() == SolveResult::Sat);
        CHECK(satisfies(clauses, solver.model()));
    }
}

TEST_CASE("conflict budget turns into a timeout") {
    Solver solver;
    for (const Clause& c : pigeonhole(9)) solver.add_clause(c);
    Solver::Limits limits;
    limits.max_conflicts = 1;
    CHECK(solver.solve(limits) == SolveResult::Timeout);
}

TEST_CASE("DIMACS round-trip") {
    DimacsInstance instance;
    instance.num_vars = 4;
    instance.clauses = {{1, -2}, {3, 4, -1}, {2}};
    DimacsInstance back = parse_dimacs(to_dimacs(instance));
    CHECK(back.num_vars == instance.num_vars);
    CHECK(back.clauses == instance.clauses);

    DimacsInstance commented = parse_dimacs("c a comment\np cnf 2 1\nc another\n1 -2 0\n");
    CHECK(commented.num_vars == 2);
    CHECK(commented.clauses == std::vector<Clause>{{1, -2}});
}

TEST_CASE("external solver protocol: exit codes and value lines") {
    DimacsInstance instance;
    instance.num_vars = 3;
    instance.clauses = {{1, -2}, {3}};

    std::string sat_cmd = write_script(
        "whyprov-test-sat.sh", "echo 's SATISFIABLE'\necho 'v 1 -2 3 0'\nexit 10\n");
    ExternalSolveResult sat = run_external_solver(sat_cmd, instance);
    REQUIRE(sat.status == SolveResult::Sat);
    REQUIRE(sat.model.size() >= 4);
    CHECK(sat.model[1]);
    CHECK(!sat.model[2]);
    CHECK(sat.model[3]);

    std::string unsat_cmd =
        write_script("whyprov-test-unsat.sh", "echo 's UNSATISFIABLE'\nexit 20\n");
    CHECK(run_external_solver(unsat_cmd, instance).status == SolveResult::Unsat);

    std::string bad_cmd = write_script("whyprov-test-bad.sh", "exit 1\n");
    CHECK_THROWS_AS(run_external_solver(bad_cmd, instance), SolverTimeout);
}
