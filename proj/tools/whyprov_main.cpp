#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "whyprov/closure.hpp"
#include "whyprov/datalog.hpp"
#include "whyprov/encoder.hpp"
#include "whyprov/engine.hpp"
#include "whyprov/errors.hpp"
#include "whyprov/generators.hpp"
#include "whyprov/harness.hpp"
#include "whyprov/provenance.hpp"

namespace {

using namespace whyprov;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNotAnAnswer = 3;
constexpr int kExitTimeout = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct GoalSpec {
    Symbol predicate;
    std::vector<Symbol> args;
};

GoalSpec parse_goal(const std::string& text, const Program& p) {
    auto open = text.find('(');
    auto close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open) {
        throw SyntaxError(0, 0, "goal tuple must look like Pred(c1,...,ck)");
    }
    auto trim = [](std::string s) {
        std::size_t a = s.find_first_not_of(" \t");
        std::size_t b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    std::string pred = trim(text.substr(0, open));
    GoalSpec goal{intern(pred), {}};
    if (!p.has_predicate(goal.predicate)) throw UnknownPredicate(pred);
    std::string inner = text.substr(open + 1, close - open - 1);
    std::istringstream ss(inner);
    std::string part;
    while (std::getline(ss, part, ',')) {
        std::string c = trim(part);
        if (c.empty()) throw SyntaxError(0, 0, "empty constant in goal tuple");
        goal.args.push_back(intern(c));
    }
    if (goal.args.size() != p.arity(goal.predicate)) throw ArityMismatch(pred);
    return goal;
}

AcyclicityStrategy parse_strategy(const std::string& s) {
    if (s == "tc") return AcyclicityStrategy::TransitiveClosure;
    if (s == "ve") return AcyclicityStrategy::VertexElimination;
    throw Error("unknown acyclicity strategy: " + s);
}

const char* status_name(EnumerationStatus s) {
    switch (s) {
        case EnumerationStatus::Exhausted: return "exhausted";
        case EnumerationStatus::LimitReached: return "limit-reached";
        case EnumerationStatus::Timeout: return "timeout";
    }
    return "?";
}

struct DelayStats {
    double min = 0, median = 0, max = 0;
};

DelayStats delay_stats(const std::vector<ProvenanceMember>& members) {
    DelayStats s;
    if (members.empty()) return s;
    std::vector<double> d;
    for (const ProvenanceMember& m : members) d.push_back(m.delay_seconds);
    std::sort(d.begin(), d.end());
    s.min = d.front();
    s.max = d.back();
    s.median = d[d.size() / 2];
    return s;
}

std::string member_line(const Support& facts) {
    std::string line;
    for (std::size_t i = 0; i < facts.size(); ++i) {
        if (i) line += "; ";
        line += render_fact(facts[i]);
    }
    return line;
}

struct CommonArgs {
    std::string program_path;
    std::string facts_path;
    std::string output = "text";
};

struct Loaded {
    Program program;
    Database db;
};

Loaded load(const CommonArgs& args) {
    Program p = parse_program(read_file(args.program_path));
    Database db = parse_database(read_file(args.facts_path), p);
    return {std::move(p), std::move(db)};
}

int cmd_eval(const CommonArgs& args, const std::string& predicate) {
    Loaded in = load(args);
    Symbol pred = intern(predicate);
    if (!in.program.has_predicate(pred)) throw UnknownPredicate(predicate);
    Query q{in.program, pred};
    std::vector<std::vector<Symbol>> tuples = answers(q, in.db);
    if (args.output == "json") {
        nlohmann::json j;
        j["predicate"] = predicate;
        j["answers"] = nlohmann::json::array();
        for (const auto& t : tuples) {
            nlohmann::json row = nlohmann::json::array();
            for (Symbol s : t) row.push_back(std::string(symbol_name(s)));
            j["answers"].push_back(row);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& t : tuples) {
            std::cout << render_fact(Fact{pred, t}) << "\n";
        }
    }
    return kExitOk;
}

EnumerationResult run_enumeration(const Query& q, const Database& db,
                                  const std::vector<Symbol>& tuple,
                                  const EnumerateOptions& opts) {
    const char* external = std::getenv("WHYPROV_SAT_SOLVER");
    if (external && *external) return enumerate_external(q, db, tuple, external, opts);
    return enumerate(q, db, tuple, opts);
}

int cmd_explain(const CommonArgs& args, const std::string& goal_text, const std::string& strategy,
                std::size_t limit, double timeout, bool witnesses) {
    Loaded in = load(args);
    GoalSpec goal = parse_goal(goal_text, in.program);
    Query q{in.program, goal.predicate};

    FixpointResult fix = fixpoint(q.program, in.db);
    if (!fix.derives(Fact{goal.predicate, goal.args})) {
        std::cerr << "tuple " << goal_text << " is not an answer\n";
        return kExitNotAnAnswer;
    }

    EnumerateOptions opts;
    opts.strategy = parse_strategy(strategy);
    opts.max_members = limit;
    opts.max_seconds = timeout;
    opts.decode_witnesses = witnesses;
    EnumerationResult result = run_enumeration(q, in.db, goal.args, opts);

    DelayStats delays = delay_stats(result.members);
    if (args.output == "json") {
        nlohmann::json j;
        j["goal"] = goal_text;
        j["status"] = status_name(result.status);
        j["members"] = nlohmann::json::array();
        for (const ProvenanceMember& m : result.members) {
            nlohmann::json facts = nlohmann::json::array();
            for (const Fact& f : m.facts) facts.push_back(render_fact(f));
            j["members"].push_back(facts);
        }
        j["stats"] = {{"member_count", result.members.size()},
                      {"total_seconds", result.total_seconds},
                      {"fixpoint_seconds", result.fixpoint_seconds},
                      {"closure_seconds", result.closure_seconds},
                      {"encode_seconds", result.encode_seconds},
                      {"delay_min", delays.min},
                      {"delay_median", delays.median},
                      {"delay_max", delays.max}};
        std::cout << j.dump(2) << "\n";
    } else {
        for (const ProvenanceMember& m : result.members) {
            std::cout << member_line(m.facts) << "\n";
            if (m.witness) std::cout << unravel(*m.witness, q.program).to_dot();
        }
        std::cout.flush();
        std::cerr << "members=" << result.members.size() << " status="
                  << status_name(result.status) << " delay_min=" << delays.min
                  << " delay_median=" << delays.median << " delay_max=" << delays.max
                  << " closure_s=" << result.closure_seconds
                  << " encode_s=" << result.encode_seconds << "\n";
    }
    return result.status == EnumerationStatus::Timeout ? kExitTimeout : kExitOk;
}

int cmd_check(const CommonArgs& args, const std::string& goal_text, const std::string& subset_path,
              const std::string& strategy) {
    Loaded in = load(args);
    GoalSpec goal = parse_goal(goal_text, in.program);
    Query q{in.program, goal.predicate};
    Database subset = parse_database(read_file(subset_path), in.program);
    bool member = check_membership(q, in.db, goal.args, subset, parse_strategy(strategy));
    std::cout << (member ? "MEMBER" : "NOT-MEMBER") << "\n";
    return member ? kExitOk : kExitNegative;
}

int cmd_export_dimacs(const CommonArgs& args, const std::string& goal_text,
                      const std::string& strategy, const std::string& cnf_path,
                      const std::string& map_path) {
    Loaded in = load(args);
    GoalSpec goal = parse_goal(goal_text, in.program);
    Query q{in.program, goal.predicate};

    FixpointResult fix = fixpoint(q.program, in.db);
    Fact goal_fact{goal.predicate, goal.args};
    if (!fix.derives(goal_fact)) {
        std::cerr << "tuple " << goal_text << " is not an answer\n";
        return kExitNotAnAnswer;
    }
    Hypergraph gri = build_gri(q.program, in.db, fix);
    DownwardClosure dc = downward_closure(gri, goal_fact);
    CnfInstance cnf = encode(dc, q.program, in.db, parse_strategy(strategy));
    std::ofstream(cnf_path) << to_dimacs(cnf);
    std::ofstream(map_path) << var_map_text(cnf);
    return kExitOk;
}

int cmd_bench(std::size_t nodes, std::size_t edges, std::uint64_t seed, std::size_t tuples,
              std::size_t limit, const std::string& strategy, const std::string& graph_path) {
    Query q = [&] {
        if (!graph_path.empty()) {
            Program p = parse_program(
                "T(x, y) :- E(x, y).\n"
                "T(x, y) :- T(x, z), E(z, y).\n");
            return Query{std::move(p), intern("T")};
        }
        return gen_transclosure(nodes, edges, seed).query;
    }();
    Database db;
    if (!graph_path.empty()) {
        std::istringstream in(read_file(graph_path));
        std::string a, b;
        while (in >> a >> b) db.insert(Fact{intern("E"), {intern(a), intern(b)}});
    } else {
        db = gen_transclosure(nodes, edges, seed).db;
    }

    std::vector<std::vector<Symbol>> all = answers(q, db);
    std::mt19937_64 rng(seed + 1);
    std::vector<std::vector<Symbol>> chosen;
    for (std::size_t i = 0; i < tuples && !all.empty(); ++i) {
        chosen.push_back(all[rng() % all.size()]);
    }

    nlohmann::json j;
    j["nodes"] = nodes;
    j["edges"] = edges;
    j["seed"] = seed;
    j["answer_count"] = all.size();
    j["tuples"] = nlohmann::json::array();
    for (const auto& tuple : chosen) {
        nlohmann::json rec;
        rec["tuple"] = render_fact(Fact{q.answer_predicate, tuple});
        if (limit == 0) {
            // Encode-only timing: build everything but enumerate nothing.
            EnumerationResult timing;
            FixpointResult fix = fixpoint(q.program, db);
            auto t0 = std::chrono::steady_clock::now();
            Hypergraph gri = build_gri(q.program, db, fix);
            DownwardClosure dc = downward_closure(gri, Fact{q.answer_predicate, tuple});
            rec["closure_seconds"] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            t0 = std::chrono::steady_clock::now();
            CnfInstance cnf = encode(dc, q.program, db, parse_strategy(strategy));
            rec["encode_seconds"] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            rec["vars"] = cnf.var_map.num_vars();
            rec["clauses"] = cnf.clauses.size();
        } else {
            EnumerateOptions opts;
            opts.strategy = parse_strategy(strategy);
            opts.max_members = limit;
            EnumerationResult r = run_enumeration(q, db, tuple, opts);
            DelayStats delays = delay_stats(r.members);
            rec["members"] = r.members.size();
            rec["status"] = status_name(r.status);
            rec["closure_seconds"] = r.closure_seconds;
            rec["encode_seconds"] = r.encode_seconds;
            rec["total_seconds"] = r.total_seconds;
            rec["delay_min"] = delays.min;
            rec["delay_median"] = delays.median;
            rec["delay_max"] = delays.max;
        }
        j["tuples"].push_back(rec);
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& mode, std::size_t count, std::uint64_t seed,
              std::vector<std::string> profiles) {
    SweepReport report;
    if (mode == "unwhy") {
        if (profiles.empty()) profiles = {"tiny-linear", "tiny-nonlinear"};
        report = sweep_unwhy(profiles, count, seed);
    } else if (mode == "reduction") {
        report = sweep_reduction(count, seed);
    } else {
        throw Error("unknown sweep mode: " + mode);
    }
    std::cout << report.to_json() << "\n";
    return report.passed() ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Datalog why-provenance toolkit"};
    app.require_subcommand(1);

    CommonArgs common;
    std::string goal_text, strategy = "ve", predicate, subset_path;
    std::string cnf_path = "out.cnf", map_path = "out.map", graph_path, mode = "unwhy";
    std::size_t limit = 0, nodes = 200, edges = 600, tuples = 5, bench_limit = 1000, count = 100;
    std::uint64_t seed = 1;
    double timeout = 0;
    bool witnesses = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--program", common.program_path, "Datalog rules file")->required();
        sub->add_option("--facts", common.facts_path, "fact file")->required();
        sub->add_option("--output", common.output, "text|json");
    };

    CLI::App* eval = app.add_subcommand("eval", "evaluate a query and print its answers");
    add_common(eval);
    eval->add_option("--predicate", predicate, "answer predicate")->required();

    CLI::App* explain = app.add_subcommand("explain", "enumerate explanations of an answer");
    add_common(explain);
    explain->add_option("--tuple", goal_text, "goal, e.g. A(d)")->required();
    explain->add_option("--strategy", strategy, "acyclicity encoding: tc|ve");
    explain->add_option("--limit", limit, "stop after this many members (0 = all)");
    explain->add_option("--timeout", timeout, "wall-clock budget in seconds (0 = none)");
    explain->add_flag("--witnesses", witnesses, "also print witness derivations as DOT");

    CLI::App* check = app.add_subcommand("check", "decide membership of a database subset");
    add_common(check);
    check->add_option("--tuple", goal_text, "goal, e.g. A(d)")->required();
    check->add_option("--subset", subset_path, "candidate subset fact file")->required();
    check->add_option("--strategy", strategy, "acyclicity encoding: tc|ve");

    CLI::App* exp = app.add_subcommand("export-dimacs", "write the CNF and its variable map");
    add_common(exp);
    exp->add_option("--tuple", goal_text, "goal, e.g. A(d)")->required();
    exp->add_option("--strategy", strategy, "acyclicity encoding: tc|ve");
    exp->add_option("--cnf", cnf_path, "DIMACS output path");
    exp->add_option("--map", map_path, "variable map output path");

    CLI::App* bench = app.add_subcommand("bench", "timed enumeration over a graph scenario");
    bench->add_option("--nodes", nodes, "random graph node count");
    bench->add_option("--edges", edges, "random graph edge count");
    bench->add_option("--graph", graph_path, "edge list file (overrides the random graph)");
    bench->add_option("--seed", seed, "random seed");
    bench->add_option("--tuples", tuples, "how many answer tuples to sample");
    bench->add_option("--limit", bench_limit, "members per tuple (0 = encode-only)");
    bench->add_option("--strategy", strategy, "acyclicity encoding: tc|ve");

    std::vector<std::string> profiles;
    CLI::App* sweep = app.add_subcommand("sweep", "long-running differential sweeps");
    sweep->add_option("--mode", mode, "unwhy|reduction");
    sweep->add_option("--count", count, "instances / formulas to try");
    sweep->add_option("--seed", seed, "base seed");
    sweep->add_option("--profile", profiles, "instance profiles (unwhy mode)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) return cmd_eval(common, predicate);
        if (explain->parsed()) {
            return cmd_explain(common, goal_text, strategy, limit, timeout, witnesses);
        }
        if (check->parsed()) return cmd_check(common, goal_text, subset_path, strategy);
        if (exp->parsed()) {
            return cmd_export_dimacs(common, goal_text, strategy, cnf_path, map_path);
        }
        if (bench->parsed()) {
            return cmd_bench(nodes, edges, seed, tuples, bench_limit, strategy, graph_path);
        }
        if (sweep->parsed()) return cmd_sweep(mode, count, seed, profiles);
    } catch (const NotASubset& e) {
        std::cerr << "error: subset contains a foreign fact: " << e.what() << "\n";
        return kExitInputError;
    } catch (const SolverTimeout& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTimeout;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
