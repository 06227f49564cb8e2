#include "whyprov/provenance.hpp"

#include <algorithm>
#include <chrono>

#include "whyprov/errors.hpp"

namespace whyprov {
namespace {

Fact goal_fact(const Query& q, const std::vector<Symbol>& tuple) {
    if (tuple.size() != q.program.arity(q.answer_predicate)) {
        throw ArityMismatch(symbol_name(q.answer_predicate));
    }
    return Fact{q.answer_predicate, tuple};
}

}  // namespace

Support db_of_assignment(const std::vector<bool>& model, const VarMap& vm, const Database& db) {
    std::vector<Fact> out;
    for (const auto& [fact, var] : vm.node_vars()) {
        if (db.contains(fact) && model[static_cast<std::size_t>(var)]) out.push_back(fact);
    }
    return make_support(std::move(out));
}

CompressedDag decode_witness(const std::vector<bool>& model, const VarMap& vm,
                             const DownwardClosure& dc, const Program& p) {
    CompressedDag dag;
    dag.root = dc.goal;
    for (const auto& [fact, var] : vm.node_vars()) {
        if (model[static_cast<std::size_t>(var)]) dag.nodes.push_back(fact);
    }
    std::sort(dag.nodes.begin(), dag.nodes.end(), fact_less);
    for (const Fact& f : dag.nodes) {
        if (!p.is_idb(f.predicate)) continue;
        for (std::size_t id : dc.graph.edges_with_head(f)) {
            if (model[static_cast<std::size_t>(vm.hedge_var(id))]) {
                dag.triggers.emplace(f, CompressedDag::Trigger{dc.graph.hyperedges()[id].body,
                                                               dc.graph.edge_rule(id),
                                                               dc.graph.edge_homomorphism(id)});
                break;
            }
        }
    }
    return dag;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct PreparedInstance {
    bool derivable = false;
    DownwardClosure dc{Hypergraph{}, Fact{}};
    CnfInstance cnf;
};

PreparedInstance prepare(const Query& q, const Database& db, const Fact& goal,
                         const EnumerateOptions& opts, EnumerationResult& result) {
    PreparedInstance out;
    auto t0 = std::chrono::steady_clock::now();
    FixpointResult fix = fixpoint(q.program, db);
    result.fixpoint_seconds = seconds_since(t0);
    if (!fix.derives(goal)) return out;  // not an answer: empty family, Exhausted

    t0 = std::chrono::steady_clock::now();
    Hypergraph gri = build_gri(q.program, db, fix);
    out.dc = downward_closure(gri, goal);
    result.closure_seconds = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    out.cnf = encode(out.dc, q.program, db, opts.strategy, opts.encoder_limits);
    result.encode_seconds = seconds_since(t0);
    out.derivable = true;
    return out;
}

}  // namespace

EnumerationResult enumerate(const Query& q, const Database& db, const std::vector<Symbol>& tuple,
                            const EnumerateOptions& opts) {
    Fact goal = goal_fact(q, tuple);
    auto start = std::chrono::steady_clock::now();

    EnumerationResult result;
    PreparedInstance prep = prepare(q, db, goal, opts, result);
    if (!prep.derivable) {
        result.total_seconds = seconds_since(start);
        return result;
    }
    const DownwardClosure& dc = prep.dc;
    CnfInstance& cnf = prep.cnf;

    Solver solver(cnf.var_map.num_vars());
    for (const Clause& c : cnf.clauses) solver.add_clause(c);

    // Per-member delays time the solver, not the preparation phases (those
    // are reported separately).
    auto last_emit = std::chrono::steady_clock::now();
    while (true) {
        Solver::Limits budget = opts.solver_limits;
        if (opts.max_seconds > 0) {
            double remaining = opts.max_seconds - seconds_since(start);
            if (remaining <= 0) {
                result.status = EnumerationStatus::Timeout;
                break;
            }
            if (budget.max_seconds <= 0 || budget.max_seconds > remaining) {
                budget.max_seconds = remaining;
            }
        }
        SolveResult sr = solver.solve(budget);
        if (sr == SolveResult::Unsat) {
            result.status = EnumerationStatus::Exhausted;
            break;
        }
        if (sr == SolveResult::Timeout) {
            result.status = EnumerationStatus::Timeout;
            break;
        }
        std::vector<bool> model = solver.model();
        ProvenanceMember member;
        member.facts = db_of_assignment(model, cnf.var_map, db);
        member.ordinal = result.members.size();
        member.delay_seconds = seconds_since(last_emit);
        last_emit = std::chrono::steady_clock::now();
        if (opts.decode_witnesses) {
            member.witness = decode_witness(model, cnf.var_map, dc, q.program);
        }

        Clause blocking;
        for (int v : cnf.db_leaf_vars) {
            blocking.push_back(model[static_cast<std::size_t>(v)] ? -v : v);
        }
        solver.add_clause(blocking);
        result.members.push_back(std::move(member));

        if (opts.max_members && result.members.size() >= opts.max_members) {
            result.status = EnumerationStatus::LimitReached;
            break;
        }
    }
    result.total_seconds = seconds_since(start);
    return result;
}

EnumerationResult enumerate_external(const Query& q, const Database& db,
                                     const std::vector<Symbol>& tuple, const std::string& command,
                                     const EnumerateOptions& opts) {
    Fact goal = goal_fact(q, tuple);
    auto start = std::chrono::steady_clock::now();

    EnumerationResult result;
    PreparedInstance prep = prepare(q, db, goal, opts, result);
    if (!prep.derivable) {
        result.total_seconds = seconds_since(start);
        return result;
    }

    DimacsInstance instance{prep.cnf.var_map.num_vars(), prep.cnf.clauses};
    auto last_emit = std::chrono::steady_clock::now();
    while (true) {
        if (opts.max_seconds > 0 && seconds_since(start) > opts.max_seconds) {
            result.status = EnumerationStatus::Timeout;
            break;
        }
        ExternalSolveResult sr;
        try {
            sr = run_external_solver(command, instance);
        } catch (const SolverTimeout&) {
            result.status = EnumerationStatus::Timeout;
            break;
        }
        if (sr.status == SolveResult::Unsat) {
            result.status = EnumerationStatus::Exhausted;
            break;
        }
        ProvenanceMember member;
        member.facts = db_of_assignment(sr.model, prep.cnf.var_map, db);
        member.ordinal = result.members.size();
        member.delay_seconds = seconds_since(last_emit);
        last_emit = std::chrono::steady_clock::now();
        if (opts.decode_witnesses) {
            member.witness = decode_witness(sr.model, prep.cnf.var_map, prep.dc, q.program);
        }

        Clause blocking;
        for (int v : prep.cnf.db_leaf_vars) {
            blocking.push_back(sr.model[static_cast<std::size_t>(v)] ? -v : v);
        }
        if (blocking.empty()) {
            result.members.push_back(std::move(member));
            result.status = EnumerationStatus::Exhausted;
            break;
        }
        instance.clauses.push_back(std::move(blocking));
        result.members.push_back(std::move(member));

        if (opts.max_members && result.members.size() >= opts.max_members) {
            result.status = EnumerationStatus::LimitReached;
            break;
        }
    }
    result.total_seconds = seconds_since(start);
    return result;
}

bool check_membership(const Query& q, const Database& db, const std::vector<Symbol>& tuple,
                      const Database& d_sub, AcyclicityStrategy strategy) {
    Fact goal = goal_fact(q, tuple);
    for (const Fact& f : d_sub.facts()) {
        if (!db.contains(f)) throw NotASubset(render_fact(f));
    }
    FixpointResult fix = fixpoint(q.program, db);
    if (!fix.derives(goal)) return false;

    Hypergraph gri = build_gri(q.program, db, fix);
    DownwardClosure dc = downward_closure(gri, goal);
    for (const Fact& f : d_sub.facts()) {
        if (!dc.graph.has_node(f)) return false;  // can never appear as a leaf
    }

    CnfInstance cnf = encode(dc, q.program, db, strategy);
    Solver solver(cnf.var_map.num_vars());
    for (const Clause& c : cnf.clauses) solver.add_clause(c);
    for (const auto& [f, var] : cnf.var_map.node_vars()) {
        if (db.contains(f)) solver.add_clause({d_sub.contains(f) ? var : -var});
    }
    return solver.solve() == SolveResult::Sat;
}

std::string render_members(const std::vector<ProvenanceMember>& members) {
    std::string out;
    for (const ProvenanceMember& m : members) {
        for (std::size_t i = 0; i < m.facts.size(); ++i) {
            if (i) out += "; ";
            out += render_fact(m.facts[i]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace whyprov
