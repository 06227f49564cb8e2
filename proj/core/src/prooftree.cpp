#include "whyprov/prooftree.hpp"

#include <algorithm>
#include <functional>

#include "whyprov/errors.hpp"

namespace whyprov {
namespace {

std::unordered_map<Symbol, Symbol> hom_as_map(const std::vector<std::pair<Symbol, Symbol>>& h) {
    std::unordered_map<Symbol, Symbol> m;
    for (const auto& [v, c] : h) m.emplace(v, c);
    return m;
}

Fact apply_hom(const Atom& atom, const std::unordered_map<Symbol, Symbol>& hom) {
    Fact f{atom.predicate, {}};
    f.args.reserve(atom.args.size());
    for (const Term& t : atom.args) {
        f.args.push_back(t.is_constant() ? t.sym : hom.at(t.sym));
    }
    return f;
}

}  // namespace

bool SupportLess::operator()(const Support& a, const Support& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), fact_less);
}

Support make_support(std::vector<Fact> facts) {
    std::sort(facts.begin(), facts.end(), fact_less);
    facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
    return facts;
}

std::size_t ProofTree::depth() const {
    std::function<std::size_t(std::size_t)> rec = [&](std::size_t v) {
        std::size_t d = 0;
        for (std::size_t c : nodes[v].children) d = std::max(d, 1 + rec(c));
        return d;
    };
    return nodes.empty() ? 0 : rec(0);
}

namespace {

std::string dot_of(const std::vector<std::pair<Fact, std::vector<std::size_t>>>& nodes) {
    std::string out = "digraph proof {\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        out += "  n" + std::to_string(i) + " [label=\"" + render_fact(nodes[i].first) + "\"];\n";
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t c : nodes[i].second) {
            out += "  n" + std::to_string(i) + " -> n" + std::to_string(c) + ";\n";
        }
    }
    out += "}\n";
    return out;
}

}  // namespace

std::string ProofTree::to_dot() const {
    std::vector<std::pair<Fact, std::vector<std::size_t>>> flat;
    for (const Node& n : nodes) flat.emplace_back(n.label, n.children);
    return dot_of(flat);
}

std::string ProofDag::to_dot() const {
    std::vector<std::pair<Fact, std::vector<std::size_t>>> flat;
    for (const Node& n : nodes) flat.emplace_back(n.label, n.children);
    return dot_of(flat);
}

std::vector<Fact> CompressedDag::support() const {
    std::vector<Fact> leaves;
    for (const Fact& f : nodes) {
        if (!triggers.count(f)) leaves.push_back(f);
    }
    return make_support(std::move(leaves));
}

// ---------------------------------------------------------------------------
// Tree predicates

namespace {

// Multiset match of children labels against the body atoms of some rule,
// with a homomorphism consistent across head and body.
bool node_has_instantiation(const Program& p, const Fact& label,
                            const std::vector<Fact>& child_labels) {
    for (const Rule& r : p.rules()) {
        if (r.head.predicate != label.predicate) continue;
        if (r.body.size() != child_labels.size()) continue;

        std::unordered_map<Symbol, Symbol> binding;
        auto bind_atom = [&](const Atom& atom, const Fact& f, std::vector<Symbol>& trail) {
            if (atom.predicate != f.predicate || atom.args.size() != f.args.size()) return false;
            for (std::size_t i = 0; i < atom.args.size(); ++i) {
                const Term& t = atom.args[i];
                if (t.is_constant()) {
                    if (t.sym != f.args[i]) return false;
                } else {
                    auto it = binding.find(t.sym);
                    if (it == binding.end()) {
                        binding.emplace(t.sym, f.args[i]);
                        trail.push_back(t.sym);
                    } else if (it->second != f.args[i]) {
                        return false;
                    }
                }
            }
            return true;
        };

        std::vector<Symbol> head_trail;
        if (!bind_atom(r.head, label, head_trail)) {
            for (Symbol v : head_trail) binding.erase(v);
            continue;
        }

        std::vector<bool> used(child_labels.size(), false);
        std::function<bool(std::size_t)> assign = [&](std::size_t i) {
            if (i == r.body.size()) return true;
            for (std::size_t j = 0; j < child_labels.size(); ++j) {
                if (used[j]) continue;
                std::vector<Symbol> trail;
                if (bind_atom(r.body[i], child_labels[j], trail)) {
                    used[j] = true;
                    if (assign(i + 1)) return true;
                    used[j] = false;
                }
                for (Symbol v : trail) binding.erase(v);
            }
            return false;
        };
        if (assign(0)) return true;
    }
    return false;
}

}  // namespace

bool validate_tree(const ProofTree& t, const Program& p, const Database& db, const Fact& goal) {
    if (t.nodes.empty()) return false;
    if (!(t.nodes[0].label == goal)) return false;
    for (const ProofTree::Node& n : t.nodes) {
        if (n.children.empty()) {
            if (!db.contains(n.label)) return false;
        } else {
            std::vector<Fact> child_labels;
            for (std::size_t c : n.children) child_labels.push_back(t.nodes[c].label);
            if (!node_has_instantiation(p, n.label, child_labels)) return false;
        }
    }
    return true;
}

Support support(const ProofTree& t) {
    std::vector<Fact> leaves;
    for (const ProofTree::Node& n : t.nodes) {
        if (n.children.empty()) leaves.push_back(n.label);
    }
    return make_support(std::move(leaves));
}

Support support(const ProofDag& g) {
    std::vector<Fact> leaves;
    for (const ProofDag::Node& n : g.nodes) {
        if (n.children.empty()) leaves.push_back(n.label);
    }
    return make_support(std::move(leaves));
}

bool is_unambiguous(const ProofTree& t) {
    // Canonical form: label plus sorted child canonical forms. Equal-labeled
    // subtrees are isomorphic iff their canonical forms coincide.
    std::vector<std::string> canon(t.nodes.size());
    std::function<void(std::size_t)> rec = [&](std::size_t v) {
        std::vector<std::string> child_forms;
        for (std::size_t c : t.nodes[v].children) {
            rec(c);
            child_forms.push_back(canon[c]);
        }
        std::sort(child_forms.begin(), child_forms.end());
        std::string form = render_fact(t.nodes[v].label);
        form += '[';
        for (const std::string& s : child_forms) {
            form += s;
            form += ',';
        }
        form += ']';
        canon[v] = std::move(form);
    };
    if (t.nodes.empty()) return true;
    rec(0);

    std::unordered_map<std::string, std::string> form_by_label;
    for (std::size_t v = 0; v < t.nodes.size(); ++v) {
        auto [it, fresh] = form_by_label.emplace(render_fact(t.nodes[v].label), canon[v]);
        if (!fresh && it->second != canon[v]) return false;
    }
    return true;
}

bool is_nonrecursive_tree(const ProofTree& t) {
    FactSet path;
    bool ok = true;
    std::function<void(std::size_t)> rec = [&](std::size_t v) {
        if (!ok) return;
        if (!path.insert(t.nodes[v].label).second) {
            ok = false;
            return;
        }
        for (std::size_t c : t.nodes[v].children) rec(c);
        path.erase(t.nodes[v].label);
    };
    if (!t.nodes.empty()) rec(0);
    return ok;
}

bool is_minimal_depth_tree(const ProofTree& t, const FixpointResult& fix) {
    if (t.nodes.empty()) return false;
    return t.depth() == fix.rank_of(t.nodes[0].label);
}

// ---------------------------------------------------------------------------
// Unravelling

ProofTree unravel(const ProofDag& g) {
    ProofTree t;
    std::function<std::size_t(std::size_t)> rec = [&](std::size_t v) {
        std::size_t node = t.add_node(g.nodes[v].label);
        for (std::size_t c : g.nodes[v].children) {
            std::size_t child = rec(c);
            t.nodes[node].children.push_back(child);
        }
        return node;
    };
    if (!g.nodes.empty()) rec(g.root);
    return t;
}

ProofTree unravel(const CompressedDag& g, const Program& p) {
    ProofTree t;
    std::function<std::size_t(const Fact&)> rec = [&](const Fact& f) {
        std::size_t node = t.add_node(f);
        auto it = g.triggers.find(f);
        if (it != g.triggers.end()) {
            const Rule& rule = p.rules()[it->second.rule_index];
            auto hom = hom_as_map(it->second.homomorphism);
            // One child per body atom: duplicates reappear in the tree.
            for (const Atom& atom : rule.body) {
                std::size_t child = rec(apply_hom(atom, hom));
                t.nodes[node].children.push_back(child);
            }
        }
        return node;
    };
    rec(g.root);
    return t;
}

bool is_valid_compressed_dag(const CompressedDag& g, const Program& p, const Database& db) {
    FactSet node_set(g.nodes.begin(), g.nodes.end());
    if (node_set.size() != g.nodes.size()) return false;  // one node per fact
    if (!node_set.count(g.root)) return false;

    FactSet has_incoming;
    for (const auto& [head, trigger] : g.triggers) {
        if (!node_set.count(head)) return false;
        const Rule& rule = p.rules()[trigger.rule_index];
        auto hom = hom_as_map(trigger.homomorphism);
        if (!(apply_hom(rule.head, hom) == head)) return false;
        std::vector<Fact> grounded;
        for (const Atom& atom : rule.body) grounded.push_back(apply_hom(atom, hom));
        if (make_support(std::move(grounded)) != trigger.children) return false;
        for (const Fact& c : trigger.children) {
            if (!node_set.count(c)) return false;
            has_incoming.insert(c);
        }
    }
    if (has_incoming.count(g.root)) return false;

    // Leaves must come from the database.
    for (const Fact& f : g.nodes) {
        if (!g.triggers.count(f) && !db.contains(f)) return false;
        if (!(f == g.root) && !has_incoming.count(f)) return false;  // rooted
    }

    // Acyclicity.
    enum class Mark { White, Grey, Black };
    std::unordered_map<Fact, Mark, FactHash> mark;
    bool acyclic = true;
    std::function<void(const Fact&)> visit = [&](const Fact& f) {
        mark[f] = Mark::Grey;
        auto it = g.triggers.find(f);
        if (it != g.triggers.end()) {
            for (const Fact& c : it->second.children) {
                auto m = mark.find(c);
                if (m == mark.end()) {
                    visit(c);
                } else if (m->second == Mark::Grey) {
                    acyclic = false;
                }
                if (!acyclic) return;
            }
        }
        mark[f] = Mark::Black;
    };
    visit(g.root);
    if (!acyclic) return false;

    // Every node reachable from the root.
    for (const Fact& f : g.nodes) {
        if (!mark.count(f)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Oracles

UnwhyOracleResult oracle_unwhy(const Query& q, const Database& db,
                               const std::vector<Symbol>& tuple, const OracleLimits& limits) {
    if (tuple.size() != q.program.arity(q.answer_predicate)) {
        throw ArityMismatch(symbol_name(q.answer_predicate));
    }
    Fact goal{q.answer_predicate, tuple};
    FixpointResult fix = fixpoint(q.program, db);
    UnwhyOracleResult result;
    if (!fix.derives(goal)) return result;

    Hypergraph gri = build_gri(q.program, db, fix);
    DownwardClosure dc = downward_closure(gri, goal);
    if (dc.graph.nodes().size() > limits.max_closure_nodes) {
        throw OracleTooLarge("downward closure has " + std::to_string(dc.graph.nodes().size()) +
                             " nodes (cap " + std::to_string(limits.max_closure_nodes) + ")");
    }

    std::unordered_map<Fact, std::size_t, FactHash> chosen;  // intensional fact -> hyperedge
    std::unordered_map<Fact, std::size_t, FactHash> in_graph;  // fact -> refcount
    std::vector<Fact> pending;
    std::size_t steps = 0;

    auto finalize = [&]() {
        // Acyclicity + root-has-no-incoming over the chosen edges.
        for (const auto& [_, edge] : chosen) {
            for (const Fact& b : dc.graph.hyperedges()[edge].body) {
                if (b == goal) return;  // incoming edge into the root
            }
        }
        enum class Mark { White, Grey, Black };
        std::unordered_map<Fact, Mark, FactHash> mark;
        bool acyclic = true;
        std::function<void(const Fact&)> visit = [&](const Fact& f) {
            mark[f] = Mark::Grey;
            auto it = chosen.find(f);
            if (it != chosen.end()) {
                for (const Fact& c : dc.graph.hyperedges()[it->second].body) {
                    auto m = mark.find(c);
                    if (m == mark.end()) {
                        visit(c);
                    } else if (m->second == Mark::Grey) {
                        acyclic = false;
                    }
                    if (!acyclic) return;
                }
            }
            mark[f] = Mark::Black;
        };
        visit(goal);
        if (!acyclic) return;

        std::vector<Fact> leaves;
        for (const auto& [f, _] : in_graph) {
            if (!chosen.count(f)) leaves.push_back(f);
        }
        Support s = make_support(std::move(leaves));
        if (result.supports.insert(s).second) {
            CompressedDag witness;
            witness.root = goal;
            for (const auto& [f, _] : in_graph) witness.nodes.push_back(f);
            for (const auto& [f, edge] : chosen) {
                witness.triggers.emplace(
                    f, CompressedDag::Trigger{dc.graph.hyperedges()[edge].body,
                                              dc.graph.edge_rule(edge),
                                              dc.graph.edge_homomorphism(edge)});
            }
            result.witnesses.emplace_back(std::move(s), std::move(witness));
            if (result.supports.size() > limits.max_family) {
                throw OracleTooLarge("support family exceeded the cap");
            }
        }
    };

    std::function<void()> search = [&]() {
        if (++steps > limits.max_search_steps) {
            throw OracleTooLarge("search step cap exceeded");
        }
        if (pending.empty()) {
            finalize();
            return;
        }
        Fact f = pending.back();
        pending.pop_back();
        if (db.contains(f)) {
            // A database fact may stay a leaf even when it is derivable.
            search();
        }
        for (std::size_t edge : dc.graph.edges_with_head(f)) {
            chosen.emplace(f, edge);
            std::vector<Fact> added;
            std::size_t pushed = 0;
            for (const Fact& b : dc.graph.hyperedges()[edge].body) {
                if (in_graph[b]++ == 0) {
                    added.push_back(b);
                    if (q.program.is_idb(b.predicate)) {
                        pending.push_back(b);
                        ++pushed;
                    }
                }
            }
            search();
            for (std::size_t i = 0; i < pushed; ++i) pending.pop_back();
            for (const Fact& b : added) in_graph.erase(b);
            for (const Fact& b : dc.graph.hyperedges()[edge].body) {
                auto it = in_graph.find(b);
                if (it != in_graph.end() &&
                    std::find(added.begin(), added.end(), b) == added.end()) {
                    --it->second;
                }
            }
            chosen.erase(f);
        }
        pending.push_back(f);
    };

    in_graph[goal] = 1;
    pending.push_back(goal);
    search();

    std::sort(result.witnesses.begin(), result.witnesses.end(),
              [](const auto& a, const auto& b) { return SupportLess{}(a.first, b.first); });
    return result;
}

SupportFamily oracle_why(const Query& q, const Database& db, const std::vector<Symbol>& tuple,
                         const OracleLimits& limits) {
    if (tuple.size() != q.program.arity(q.answer_predicate)) {
        throw ArityMismatch(symbol_name(q.answer_predicate));
    }
    Fact goal{q.answer_predicate, tuple};
    FixpointResult fix = fixpoint(q.program, db);
    if (!fix.derives(goal)) return {};

    Hypergraph gri = build_gri(q.program, db, fix);
    DownwardClosure dc = downward_closure(gri, goal);
    if (dc.graph.nodes().size() > limits.max_closure_nodes) {
        throw OracleTooLarge("downward closure has " + std::to_string(dc.graph.nodes().size()) +
                             " nodes (cap " + std::to_string(limits.max_closure_nodes) + ")");
    }

    // Least fixpoint of achievable-support families per fact: database facts
    // contribute their singleton, and a hyperedge combines one support per
    // body member into a support of its head.
    std::unordered_map<Fact, SupportFamily, FactHash> fam;
    for (const Fact& f : dc.graph.nodes()) {
        if (db.contains(f)) fam[f].insert({f});
    }

    bool changed = true;
    while (changed) {
        changed = false;
        std::size_t total = 0;
        for (const Hyperedge& e : dc.graph.hyperedges()) {
            // Cross product over the body members' families.
            std::vector<const SupportFamily*> families;
            bool viable = true;
            for (const Fact& b : e.body) {
                auto it = fam.find(b);
                if (it == fam.end() || it->second.empty()) {
                    viable = false;
                    break;
                }
                families.push_back(&it->second);
            }
            if (!viable) continue;
            SupportFamily& head_fam = fam[e.head];
            std::vector<Fact> acc;
            std::function<void(std::size_t)> cross = [&](std::size_t i) {
                if (i == families.size()) {
                    std::vector<Fact> copy = acc;
                    if (head_fam.insert(make_support(std::move(copy))).second) changed = true;
                    return;
                }
                std::size_t mark = acc.size();
                for (const Support& s : *families[i]) {
                    acc.insert(acc.end(), s.begin(), s.end());
                    cross(i + 1);
                    acc.resize(mark);
                }
            };
            cross(0);
        }
        for (const auto& [_, family] : fam) total += family.size();
        if (total > limits.max_family) {
            throw OracleTooLarge("support families exceeded the cap");
        }
    }
    auto it = fam.find(goal);
    return it == fam.end() ? SupportFamily{} : it->second;
}

std::optional<std::size_t> minimal_tree_depth(const Hypergraph& gri, const Database& db,
                                              const Fact& goal, std::size_t max_depth) {
    if (!gri.has_node(goal)) return std::nullopt;
    // derivable(f, d): a proof tree of f with depth <= d exists.
    std::unordered_map<std::uint64_t, bool> memo;
    std::function<bool(const Fact&, std::size_t)> derivable = [&](const Fact& f, std::size_t d) {
        if (db.contains(f)) return true;
        if (d == 0) return false;
        std::uint64_t key = (static_cast<std::uint64_t>(gri.node_id(f)) << 32) | d;
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        bool ok = false;
        for (std::size_t edge : gri.edges_with_head(f)) {
            bool all = true;
            for (const Fact& b : gri.hyperedges()[edge].body) {
                if (!derivable(b, d - 1)) {
                    all = false;
                    break;
                }
            }
            if (all) {
                ok = true;
                break;
            }
        }
        memo[key] = ok;
        return ok;
    };
    for (std::size_t d = 0; d <= max_depth; ++d) {
        if (derivable(goal, d)) return d;
    }
    return std::nullopt;
}

}  // namespace whyprov
