#include "whyprov/encoder.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "whyprov/errors.hpp"

namespace whyprov {

int VarMap::node_var(const Fact& f) const {
    auto it = node_vars_.find(f);
    if (it == node_vars_.end()) throw Error("no node variable for " + render_fact(f));
    return it->second;
}

int VarMap::edge_var(const Fact& head, const Fact& tail) const {
    auto it = edge_vars_.find(head);
    if (it != edge_vars_.end()) {
        auto jt = it->second.find(tail);
        if (jt != it->second.end()) return jt->second;
    }
    throw Error("no edge variable for " + render_fact(head) + " -> " + render_fact(tail));
}

bool VarMap::has_edge_var(const Fact& head, const Fact& tail) const {
    auto it = edge_vars_.find(head);
    return it != edge_vars_.end() && it->second.count(tail) != 0;
}

struct EncoderBuilder {
    VarMap& vm;
    int alloc(VarKind kind, std::string description) {
        vm.info_.push_back({kind, std::move(description)});
        return static_cast<int>(vm.info_.size());
    }
    void set_node(const Fact& f, int v) { vm.node_vars_.emplace(f, v); }
    void set_hedge(std::size_t edge, int v) { vm.hedge_vars_.emplace(edge, v); }
    void set_edge(const Fact& head, const Fact& tail, int v) {
        vm.edge_vars_[head].emplace(tail, v);
        vm.edge_list_.emplace_back(head, tail, v);
    }
    void append_aux(std::vector<VarInfo> aux) {
        for (VarInfo& i : aux) vm.info_.push_back(std::move(i));
    }
};

namespace {

std::string hyperedge_key(const Hyperedge& e) {
    std::string key = render_fact(e.head) + " <- ";
    for (std::size_t i = 0; i < e.body.size(); ++i) {
        if (i) key += ", ";
        key += render_fact(e.body[i]);
    }
    return key;
}

}  // namespace

CnfInstance encode(const DownwardClosure& dc, const Program& p, const Database& db,
                   AcyclicityStrategy strategy, const EncoderLimits& limits) {
    CnfInstance cnf;
    EncoderBuilder b{cnf.var_map};
    const Hypergraph& g = dc.graph;

    // Node variables, in canonical fact order.
    std::vector<Fact> nodes = g.nodes();
    std::sort(nodes.begin(), nodes.end(), fact_less);
    std::unordered_map<Fact, std::size_t, FactHash> node_index;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        node_index.emplace(nodes[i], i);
        b.set_node(nodes[i], b.alloc(VarKind::Node, render_fact(nodes[i])));
    }

    // Hyperedge variables, sorted by textual form.
    std::vector<std::size_t> edge_order(g.hyperedges().size());
    for (std::size_t i = 0; i < edge_order.size(); ++i) edge_order[i] = i;
    std::vector<std::string> edge_keys;
    for (const Hyperedge& e : g.hyperedges()) edge_keys.push_back(hyperedge_key(e));
    std::sort(edge_order.begin(), edge_order.end(),
              [&](std::size_t a, std::size_t c) { return edge_keys[a] < edge_keys[c]; });
    for (std::size_t id : edge_order) {
        b.set_hedge(id, b.alloc(VarKind::Hedge, edge_keys[id]));
    }

    // One edge variable per distinct (head, body member) pair.
    std::map<std::pair<std::string, std::string>, std::pair<Fact, Fact>> pairs;
    for (const Hyperedge& e : g.hyperedges()) {
        for (const Fact& tail : e.body) {
            pairs.emplace(std::make_pair(render_fact(e.head), render_fact(tail)),
                          std::make_pair(e.head, tail));
        }
    }
    for (const auto& [key, hb] : pairs) {
        b.set_edge(hb.first, hb.second,
                   b.alloc(VarKind::Edge, key.first + " -> " + key.second));
    }

    auto emit = [&](Clause c) {
        cnf.clauses.push_back(std::move(c));
        if (cnf.clauses.size() > limits.max_clauses) {
            throw EncodingTooLarge("clause cap of " + std::to_string(limits.max_clauses) +
                                   " exceeded");
        }
    };

    // Selected edges force both endpoints to be selected.
    for (const auto& [head, tail, z] : cnf.var_map.edge_var_list()) {
        emit({-z, cnf.var_map.node_var(head)});
        emit({-z, cnf.var_map.node_var(tail)});
    }

    // The goal is selected, has no incoming edge, and every other selected
    // node has at least one.
    emit({cnf.var_map.node_var(dc.goal)});
    std::unordered_map<Fact, std::vector<int>, FactHash> incoming;
    for (const auto& [head, tail, z] : cnf.var_map.edge_var_list()) incoming[tail].push_back(z);
    if (auto it = incoming.find(dc.goal); it != incoming.end()) {
        for (int z : it->second) emit({-z});
    }
    for (const Fact& f : nodes) {
        if (f == dc.goal) continue;
        Clause c{-cnf.var_map.node_var(f)};
        if (auto it = incoming.find(f); it != incoming.end()) {
            c.insert(c.end(), it->second.begin(), it->second.end());
        }
        emit(std::move(c));
    }

    // Every selected derived fact is justified by a hyperedge, and a chosen
    // hyperedge fixes all edge variables out of its head.
    for (const Fact& f : nodes) {
        if (!p.is_idb(f.predicate)) continue;
        Clause c{-cnf.var_map.node_var(f)};
        for (std::size_t id : g.edges_with_head(f)) c.push_back(cnf.var_map.hedge_var(id));
        emit(std::move(c));
    }
    for (std::size_t id = 0; id < g.hyperedges().size(); ++id) {
        const Hyperedge& e = g.hyperedges()[id];
        int y = cnf.var_map.hedge_var(id);
        for (const auto& [head, tail, z] : cnf.var_map.edge_var_list()) {
            if (!(head == e.head)) continue;
            bool in_body = std::binary_search(e.body.begin(), e.body.end(), tail, fact_less);
            emit({-y, in_body ? z : -z});
        }
    }

    // Acyclicity of the selected edge relation.
    std::vector<Arc> arcs;
    for (const auto& [head, tail, z] : cnf.var_map.edge_var_list()) {
        arcs.push_back({node_index.at(head), node_index.at(tail), z});
    }
    int next_var = cnf.var_map.num_vars() + 1;
    std::vector<VarInfo> aux;
    std::vector<Clause> acyc;
    if (strategy == AcyclicityStrategy::TransitiveClosure) {
        acyc = encode_acyclicity_tc(arcs, nodes.size(), next_var, aux);
    } else {
        acyc = encode_acyclicity_ve(arcs, nodes.size(), min_degree_order(arcs, nodes.size()),
                                    next_var, aux);
    }
    b.append_aux(std::move(aux));
    for (Clause& c : acyc) emit(std::move(c));

    for (const Fact& f : nodes) {
        if (db.contains(f)) cnf.db_leaf_vars.push_back(cnf.var_map.node_var(f));
    }
    return cnf;
}

std::vector<Clause> encode_acyclicity_tc(const std::vector<Arc>& arcs, std::size_t num_nodes,
                                         int& next_var, std::vector<VarInfo>& aux_info) {
    // Reachability variable t(i,j) for every ordered pair of nodes.
    std::vector<std::vector<int>> t(num_nodes, std::vector<int>(num_nodes));
    for (std::size_t i = 0; i < num_nodes; ++i) {
        for (std::size_t j = 0; j < num_nodes; ++j) {
            t[i][j] = next_var++;
            aux_info.push_back(
                {VarKind::Aux, "t " + std::to_string(i) + " " + std::to_string(j)});
        }
    }
    std::vector<Clause> out;
    for (const Arc& a : arcs) {
        out.push_back({-a.var, t[a.from][a.to]});
        for (std::size_t k = 0; k < num_nodes; ++k) {
            out.push_back({-a.var, -t[a.to][k], t[a.from][k]});
        }
    }
    for (std::size_t i = 0; i < num_nodes; ++i) out.push_back({-t[i][i]});
    return out;
}

std::vector<Clause> encode_acyclicity_ve(const std::vector<Arc>& arcs, std::size_t num_nodes,
                                         const std::vector<std::size_t>& order, int& next_var,
                                         std::vector<VarInfo>& aux_info) {
    std::vector<Clause> out;
    // Arc presence variable per ordered pair. Input arcs start with their
    // selection variable; as soon as a pair also receives shortcut arcs it is
    // promoted to a fresh auxiliary implied by the original (the selection
    // variables carry other constraints and must never be forced directly).
    struct ArcVar {
        int var;
        bool is_aux;
    };
    std::vector<std::map<std::size_t, ArcVar>> succ(num_nodes), pred(num_nodes);
    auto promote = [&](std::size_t u, std::size_t w) {
        auto it = succ[u].find(w);
        if (it == succ[u].end()) {
            int s = next_var++;
            aux_info.push_back(
                {VarKind::Aux, "ve " + std::to_string(u) + " " + std::to_string(w)});
            succ[u].emplace(w, ArcVar{s, true});
            pred[w].emplace(u, ArcVar{s, true});
            return s;
        }
        if (!it->second.is_aux) {
            int s = next_var++;
            aux_info.push_back(
                {VarKind::Aux, "ve " + std::to_string(u) + " " + std::to_string(w)});
            out.push_back({-it->second.var, s});
            it->second = {s, true};
            pred[w][u] = {s, true};
        }
        return it->second.var;
    };
    for (const Arc& a : arcs) {
        if (succ[a.from].count(a.to)) {
            // Parallel arc over the same pair: fold into a shared presence var.
            out.push_back({-a.var, promote(a.from, a.to)});
            continue;
        }
        succ[a.from].emplace(a.to, ArcVar{a.var, false});
        pred[a.to].emplace(a.from, ArcVar{a.var, false});
    }

    // Eliminating v turns every in/out pair (u -> v -> w) into a shortcut
    // u -> w; a cycle eventually shows up as u == w and is forbidden.
    for (std::size_t v : order) {
        auto in = pred[v];
        auto out_arcs = succ[v];
        for (const auto& [u, a1] : in) {
            for (const auto& [w, a2] : out_arcs) {
                if (u == w) {
                    out.push_back({-a1.var, -a2.var});
                    continue;
                }
                int a3 = promote(u, w);
                out.push_back({-a1.var, -a2.var, a3});
            }
        }
        for (const auto& [u, _] : pred[v]) succ[u].erase(v);
        for (const auto& [w, _] : succ[v]) pred[w].erase(v);
        pred[v].clear();
        succ[v].clear();
    }
    return out;
}

std::vector<std::size_t> min_degree_order(const std::vector<Arc>& arcs, std::size_t num_nodes) {
    std::vector<std::set<std::size_t>> succ(num_nodes), pred(num_nodes);
    for (const Arc& a : arcs) {
        succ[a.from].insert(a.to);
        pred[a.to].insert(a.from);
    }
    std::vector<bool> gone(num_nodes, false);
    std::vector<std::size_t> order;
    order.reserve(num_nodes);
    for (std::size_t round = 0; round < num_nodes; ++round) {
        std::size_t best = num_nodes;
        std::size_t best_deg = 0;
        for (std::size_t v = 0; v < num_nodes; ++v) {
            if (gone[v]) continue;
            std::set<std::size_t> nb = succ[v];
            nb.insert(pred[v].begin(), pred[v].end());
            nb.erase(v);
            if (best == num_nodes || nb.size() < best_deg) {
                best = v;
                best_deg = nb.size();
            }
        }
        order.push_back(best);
        gone[best] = true;
        // Simulate the fill-in the encoder will create.
        for (std::size_t u : pred[best]) {
            if (gone[u]) continue;
            for (std::size_t w : succ[best]) {
                if (gone[w] || u == w) continue;
                succ[u].insert(w);
                pred[w].insert(u);
            }
        }
        for (std::size_t u : pred[best]) succ[u].erase(best);
        for (std::size_t w : succ[best]) pred[w].erase(best);
        pred[best].clear();
        succ[best].clear();
    }
    return order;
}

std::string to_dimacs(const CnfInstance& cnf) {
    int num_vars = cnf.var_map.num_vars();
    std::string out = "p cnf " + std::to_string(num_vars) + " " +
                      std::to_string(cnf.clauses.size()) + "\n";
    for (const Clause& c : cnf.clauses) {
        for (Lit l : c) {
            out += std::to_string(l);
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

std::string var_map_text(const CnfInstance& cnf) {
    static const char* const names[] = {"node", "hedge", "edge", "aux"};
    std::string out;
    for (int v = 1; v <= cnf.var_map.num_vars(); ++v) {
        const VarInfo& i = cnf.var_map.info(v);
        out += "var " + std::to_string(v) + " " + names[static_cast<int>(i.kind)] + " " +
               i.description + "\n";
    }
    return out;
}

}  // namespace whyprov
