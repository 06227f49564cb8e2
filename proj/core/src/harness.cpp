#include "whyprov/harness.hpp"

#include <algorithm>
#include <chrono>

#include <nlohmann/json.hpp>

#include "whyprov/errors.hpp"
#include "whyprov/prooftree.hpp"

namespace whyprov {
namespace {

std::string render_family(const SupportFamily& family) {
    std::string out = "{";
    bool first = true;
    for (const Support& s : family) {
        if (!first) out += ", ";
        first = false;
        out += render_fact_set(s);
    }
    return out + "}";
}

SupportFamily family_of(const EnumerationResult& result) {
    SupportFamily family;
    for (const ProvenanceMember& m : result.members) family.insert(m.facts);
    return family;
}

}  // namespace

std::string SweepReport::to_json() const {
    nlohmann::json j;
    j["instances"] = instances;
    j["comparisons"] = comparisons;
    j["skipped"] = skipped;
    j["total_seconds"] = total_seconds;
    j["passed"] = passed();
    j["mismatches"] = nlohmann::json::array();
    for (const SweepMismatch& m : mismatches) {
        j["mismatches"].push_back({{"seed", m.seed}, {"detail", m.detail}});
    }
    return j.dump(2);
}

SweepReport sweep_unwhy(const std::vector<std::string>& profiles, std::size_t n_instances,
                        std::uint64_t seed) {
    SweepReport report;
    auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < n_instances; ++i) {
        const std::string& profile = profiles[i % profiles.size()];
        std::uint64_t inst_seed = seed + i;
        GeneratedInstance inst = gen_random_instance(profile, inst_seed);
        ++report.instances;

        std::vector<std::vector<Symbol>> tuples = answers(inst.query, inst.db);
        if (tuples.size() > 4) tuples.resize(4);
        for (const std::vector<Symbol>& tuple : tuples) {
            SupportFamily expected;
            try {
                expected = oracle_unwhy(inst.query, inst.db, tuple).supports;
            } catch (const OracleTooLarge&) {
                ++report.skipped;
                continue;
            }
            ++report.comparisons;
            for (AcyclicityStrategy strategy : {AcyclicityStrategy::TransitiveClosure,
                                                AcyclicityStrategy::VertexElimination}) {
                EnumerateOptions opts;
                opts.strategy = strategy;
                SupportFamily got = family_of(enumerate(inst.query, inst.db, tuple, opts));
                if (got != expected) {
                    Fact goal{inst.query.answer_predicate, tuple};
                    report.mismatches.push_back(
                        {inst_seed, profile + " " + render_fact(goal) + ": expected " +
                                        render_family(expected) + " got " + render_family(got)});
                }
            }
        }
    }
    report.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

SweepReport sweep_reduction(std::size_t n_formulas, std::uint64_t seed) {
    SweepReport report;
    auto start = std::chrono::steady_clock::now();

    std::vector<Cnf3Formula> formulas;
    // Pinned endpoints: a forced-satisfiable formula and a forced-unsat pair.
    Cnf3Formula forced_sat;
    forced_sat.num_vars = 1;
    forced_sat.clauses.push_back({{{1, true}, {1, true}, {1, true}}});
    formulas.push_back(forced_sat);
    Cnf3Formula forced_unsat = forced_sat;
    forced_unsat.clauses.push_back({{{1, false}, {1, false}, {1, false}}});
    formulas.push_back(forced_unsat);
    for (std::size_t i = formulas.size(); i < n_formulas; ++i) {
        std::uint64_t s = seed + i;
        std::mt19937_64 rng(s);
        int n = 1 + static_cast<int>(rng() % 3);
        int m = 1 + static_cast<int>(rng() % 3);
        formulas.push_back(gen_random_3cnf(n, m, s));
    }

    for (std::size_t i = 0; i < formulas.size(); ++i) {
        const Cnf3Formula& phi = formulas[i];
        ++report.instances;
        bool expected = brute_force_sat(phi);
        ReductionInstance inst = gen_3sat_instance(phi);
        bool got;
        try {
            SupportFamily family = oracle_why(inst.query, inst.db, inst.tuple);
            Support whole = make_support(inst.db.facts());
            got = family.count(whole) != 0;
        } catch (const OracleTooLarge&) {
            ++report.skipped;
            continue;
        }
        ++report.comparisons;
        if (got != expected) {
            report.mismatches.push_back(
                {seed + i, "formula " + std::to_string(i) + ": sat=" +
                               (expected ? "true" : "false") + " membership=" +
                               (got ? "true" : "false")});
        }
    }
    report.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace whyprov
