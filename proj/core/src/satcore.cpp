#include "whyprov/satcore.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "whyprov/errors.hpp"

namespace whyprov {
namespace {

// Luby restart sequence: 1 1 2 1 1 2 4 ...
std::uint64_t luby(std::uint64_t i) {
    std::uint64_t k = 1;
    while ((1ull << k) - 1 < i + 1) ++k;
    while ((1ull << k) - 1 != i + 1) {
        --k;
        i -= (1ull << k) - 1;
    }
    return 1ull << (k - 1);
}

}  // namespace

void Solver::ensure_vars(int num_vars) {
    while (static_cast<int>(activity_.size()) < num_vars) {
        activity_.push_back(0.0);
        assign_.push_back(0);
        reason_.push_back(-1);
        level_.push_back(0);
        watches_.emplace_back();
        watches_.emplace_back();
    }
}

void Solver::add_clause(const Clause& lits) {
    std::vector<int> c;
    c.reserve(lits.size());
    for (Lit l : lits) {
        if (l == 0) throw Error("literal 0 in clause");
        int v = l > 0 ? l : -l;
        ensure_vars(v);
        c.push_back(encode(l));
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        if ((c[i] ^ 1) == c[i + 1]) return;  // tautology
    }
    if (c.empty()) {
        trivially_unsat_ = true;
        return;
    }
    if (c.size() == 1) {
        pending_units_.push_back(c[0]);
        return;
    }
    clauses_.push_back(std::move(c));
    attach(static_cast<std::uint32_t>(clauses_.size() - 1));
}

void Solver::attach(std::uint32_t ci) {
    const std::vector<int>& c = clauses_[ci];
    watches_[static_cast<std::size_t>(c[0])].push_back({ci, c[1]});
    watches_[static_cast<std::size_t>(c[1])].push_back({ci, c[0]});
}

bool Solver::enqueue(int lit, std::int32_t reason) {
    int v = lit >> 1;
    std::int8_t want = (lit & 1) ? static_cast<std::int8_t>(-1) : static_cast<std::int8_t>(1);
    if (assign_[v] != 0) return assign_[v] == want;
    assign_[v] = want;
    reason_[v] = reason;
    level_[v] = static_cast<int>(trail_lim_.size());
    trail_.push_back(lit);
    return true;
}

std::int32_t Solver::propagate() {
    while (qhead_ < trail_.size()) {
        int p = trail_[qhead_++];
        ++stats_.propagations;
        int false_lit = p ^ 1;
        std::vector<Watch>& ws = watches_[static_cast<std::size_t>(false_lit)];
        std::size_t keep = 0;
        for (std::size_t i = 0; i < ws.size(); ++i) {
            Watch w = ws[i];
            // Blocker already true: nothing to do.
            int bv = w.blocker >> 1;
            std::int8_t bwant =
                (w.blocker & 1) ? static_cast<std::int8_t>(-1) : static_cast<std::int8_t>(1);
            if (assign_[bv] == bwant) {
                ws[keep++] = w;
                continue;
            }
            std::vector<int>& c = clauses_[w.clause];
            if (c[0] == false_lit) std::swap(c[0], c[1]);
            int first = c[0];
            int fv = first >> 1;
            std::int8_t fwant =
                (first & 1) ? static_cast<std::int8_t>(-1) : static_cast<std::int8_t>(1);
            if (assign_[fv] == fwant) {
                ws[keep++] = {w.clause, first};
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.size(); ++k) {
                int lk = c[k];
                int kv = lk >> 1;
                std::int8_t kfalse =
                    (lk & 1) ? static_cast<std::int8_t>(1) : static_cast<std::int8_t>(-1);
                if (assign_[kv] != kfalse) {
                    std::swap(c[1], c[k]);
                    watches_[static_cast<std::size_t>(c[1])].push_back({w.clause, first});
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            // Clause is unit or conflicting on c[0].
            ws[keep++] = {w.clause, first};
            if (assign_[fv] == -fwant) {
                // Conflict: keep the remaining watches, then report.
                for (std::size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
                ws.resize(keep);
                qhead_ = trail_.size();
                return static_cast<std::int32_t>(w.clause);
            }
            enqueue(first, static_cast<std::int32_t>(w.clause));
        }
        ws.resize(keep);
    }
    return -1;
}

void Solver::bump(int var) {
    activity_[var] += activity_inc_;
    if (activity_[var] > 1e100) {
        for (double& a : activity_) a *= 1e-100;
        activity_inc_ *= 1e-100;
    }
}

void Solver::analyze(std::int32_t conflict, std::vector<int>& learnt, int& backtrack_level) {
    learnt.assign(1, 0);
    std::vector<char> seen(activity_.size(), 0);
    int counter = 0;
    int p = -1;
    std::size_t index = trail_.size();
    std::int32_t reason = conflict;
    int current = static_cast<int>(trail_lim_.size());

    do {
        const std::vector<int>& c = clauses_[reason];
        for (int q : c) {
            if (q == p) continue;
            int v = q >> 1;
            if (!seen[v] && level_[v] > 0) {
                seen[v] = 1;
                bump(v);
                if (level_[v] == current) {
                    ++counter;
                } else {
                    learnt.push_back(q);
                }
            }
        }
        while (!seen[trail_[index - 1] >> 1]) --index;
        p = trail_[--index];
        seen[p >> 1] = 0;
        --counter;
        if (counter == 0) break;
        reason = reason_[p >> 1];
    } while (true);
    learnt[0] = p ^ 1;

    backtrack_level = 0;
    if (learnt.size() > 1) {
        std::size_t max_i = 1;
        for (std::size_t i = 2; i < learnt.size(); ++i) {
            if (level_[learnt[i] >> 1] > level_[learnt[max_i] >> 1]) max_i = i;
        }
        std::swap(learnt[1], learnt[max_i]);
        backtrack_level = level_[learnt[1] >> 1];
    }
}

void Solver::cancel_until(int level) {
    if (static_cast<int>(trail_lim_.size()) <= level) return;
    std::size_t bound = static_cast<std::size_t>(trail_lim_[level]);
    while (trail_.size() > bound) {
        int v = trail_.back() >> 1;
        assign_[v] = 0;
        reason_[v] = -1;
        trail_.pop_back();
    }
    trail_lim_.resize(level);
    qhead_ = trail_.size();
}

int Solver::pick_branch() {
    int best = -1;
    for (int v = 0; v < num_vars(); ++v) {
        if (assign_[v] != 0) continue;
        if (best < 0 || activity_[v] > activity_[best]) best = v;
    }
    return best;
}

SolveResult Solver::solve(const Limits& limits) {
    if (trivially_unsat_) return SolveResult::Unsat;

    // Rebuild the trail from scratch; the clause database (including learnt
    // clauses) persists across calls.
    trail_.clear();
    trail_lim_.clear();
    qhead_ = 0;
    std::fill(assign_.begin(), assign_.end(), static_cast<std::int8_t>(0));
    std::fill(reason_.begin(), reason_.end(), -1);

    for (int u : pending_units_) {
        if (!enqueue(u, -1)) return SolveResult::Unsat;
    }
    if (propagate() >= 0) return SolveResult::Unsat;

    auto start = std::chrono::steady_clock::now();
    std::uint64_t conflicts_at_start = stats_.conflicts;
    std::uint64_t restart_round = 0;
    std::uint64_t conflict_budget = luby(restart_round) * 128;
    std::uint64_t conflicts_this_round = 0;

    while (true) {
        std::int32_t conflict = propagate();
        if (conflict >= 0) {
            ++stats_.conflicts;
            ++conflicts_this_round;
            if (trail_lim_.empty()) return SolveResult::Unsat;
            std::vector<int> learnt;
            int bt = 0;
            analyze(conflict, learnt, bt);
            cancel_until(bt);
            if (learnt.size() == 1) {
                pending_units_.push_back(learnt[0]);
                if (!enqueue(learnt[0], -1)) return SolveResult::Unsat;
            } else {
                clauses_.push_back(learnt);
                std::uint32_t ci = static_cast<std::uint32_t>(clauses_.size() - 1);
                attach(ci);
                enqueue(learnt[0], static_cast<std::int32_t>(ci));
            }
            activity_inc_ /= 0.95;

            if (limits.max_conflicts &&
                stats_.conflicts - conflicts_at_start >= limits.max_conflicts) {
                cancel_until(0);
                return SolveResult::Timeout;
            }
            if (limits.max_seconds > 0 && (stats_.conflicts & 0xff) == 0) {
                std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
                if (elapsed.count() > limits.max_seconds) {
                    cancel_until(0);
                    return SolveResult::Timeout;
                }
            }
            if (conflicts_this_round >= conflict_budget) {
                ++stats_.restarts;
                ++restart_round;
                conflict_budget = luby(restart_round) * 128;
                conflicts_this_round = 0;
                cancel_until(0);
            }
        } else {
            int v = pick_branch();
            if (v < 0) {
                model_.assign(static_cast<std::size_t>(num_vars()) + 1, false);
                for (int i = 0; i < num_vars(); ++i) model_[i + 1] = assign_[i] == 1;
                cancel_until(0);
                return SolveResult::Sat;
            }
            ++stats_.decisions;
            trail_lim_.push_back(static_cast<int>(trail_.size()));
            enqueue(2 * v + 1, -1);  // branch false first, deterministically
        }
    }
}

bool satisfies(const std::vector<Clause>& clauses, const std::vector<bool>& model) {
    for (const Clause& c : clauses) {
        bool ok = false;
        for (Lit l : c) {
            std::size_t v = static_cast<std::size_t>(l > 0 ? l : -l);
            if (v >= model.size()) return false;
            if (model[v] == (l > 0)) {
                ok = true;
                break;
            }
        }
        if (!ok) return false;
    }
    return true;
}

DimacsInstance parse_dimacs(const std::string& text) {
    DimacsInstance out;
    std::istringstream in(text);
    std::string line;
    Clause current;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        if (line[0] == 'p') {
            std::istringstream ls(line);
            std::string p, cnf;
            int clauses = 0;
            ls >> p >> cnf >> out.num_vars >> clauses;
            continue;
        }
        std::istringstream ls(line);
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                out.clauses.push_back(current);
                current.clear();
            } else {
                current.push_back(lit);
            }
        }
    }
    if (!current.empty()) out.clauses.push_back(current);
    return out;
}

std::string to_dimacs(const DimacsInstance& instance) {
    std::string out = "p cnf " + std::to_string(instance.num_vars) + " " +
                      std::to_string(instance.clauses.size()) + "\n";
    for (const Clause& c : instance.clauses) {
        for (Lit l : c) {
            out += std::to_string(l);
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

ExternalSolveResult run_external_solver(const std::string& command,
                                        const DimacsInstance& instance) {
    char cnf_path[] = "/tmp/whyprov-cnf-XXXXXX";
    char out_path[] = "/tmp/whyprov-out-XXXXXX";
    int cnf_fd = mkstemp(cnf_path);
    int out_fd = mkstemp(out_path);
    if (cnf_fd < 0 || out_fd < 0) throw Error("cannot create temporary files");
    close(out_fd);
    {
        std::string text = to_dimacs(instance);
        std::ofstream f(cnf_path);
        f << text;
    }
    close(cnf_fd);

    std::string cmd = command + " " + cnf_path + " > " + out_path + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;

    ExternalSolveResult result;
    if (code == 20) {
        result.status = SolveResult::Unsat;
    } else if (code == 10) {
        result.status = SolveResult::Sat;
        result.model.assign(static_cast<std::size_t>(instance.num_vars) + 1, false);
        std::ifstream f(out_path);
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty() || line[0] != 'v') continue;
            std::istringstream ls(line.substr(1));
            int lit;
            while (ls >> lit) {
                if (lit == 0) continue;
                std::size_t v = static_cast<std::size_t>(lit > 0 ? lit : -lit);
                if (v < result.model.size()) result.model[v] = lit > 0;
            }
        }
    } else {
        std::remove(cnf_path);
        std::remove(out_path);
        throw SolverTimeout("external solver '" + command + "' exited with code " +
                            std::to_string(code));
    }
    std::remove(cnf_path);
    std::remove(out_path);
    return result;
}

}  // namespace whyprov
