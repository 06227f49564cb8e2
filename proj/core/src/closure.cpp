#include "whyprov/closure.hpp"

#include <algorithm>
#include <deque>

#include "whyprov/errors.hpp"

namespace whyprov {
namespace {

struct HyperedgeHash {
    std::size_t operator()(const Hyperedge& e) const {
        std::size_t h = FactHash{}(e.head);
        for (const Fact& f : e.body) h = h * 31 + FactHash{}(f);
        return h;
    }
};

std::vector<Fact> canonical_body(std::vector<Fact> body) {
    std::sort(body.begin(), body.end(), fact_less);
    body.erase(std::unique(body.begin(), body.end()), body.end());
    return body;
}

bool homomorphism_less(const std::vector<std::pair<Symbol, Symbol>>& a,
                       const std::vector<std::pair<Symbol, Symbol>>& b) {
    auto render = [](const std::vector<std::pair<Symbol, Symbol>>& h) {
        std::string out;
        for (const auto& [v, c] : h) {
            out += symbol_name(v);
            out += '=';
            out += symbol_name(c);
            out += ';';
        }
        return out;
    };
    return render(a) < render(b);
}

}  // namespace

std::size_t Hypergraph::add_node(const Fact& f) {
    auto [it, fresh] = node_ids_.emplace(f, nodes_.size());
    if (fresh) nodes_.push_back(f);
    return it->second;
}

std::size_t Hypergraph::node_id(const Fact& f) const {
    auto it = node_ids_.find(f);
    if (it == node_ids_.end()) throw GoalNotDerivable("not a node: " + render_fact(f));
    return it->second;
}

bool Hypergraph::add_hyperedge(const Fact& head, std::vector<Fact> body, std::size_t rule_index,
                               std::vector<std::pair<Symbol, Symbol>> homomorphism) {
    Hyperedge edge{head, canonical_body(std::move(body))};
    for (std::size_t id : by_head_[head]) {
        if (edges_[id] == edge) {
            auto& trigger = triggers_[id];
            if (rule_index < trigger.first ||
                (rule_index == trigger.first && homomorphism_less(homomorphism, trigger.second))) {
                trigger = {rule_index, std::move(homomorphism)};
            }
            return false;
        }
    }
    add_node(head);
    for (const Fact& f : edge.body) add_node(f);
    by_head_[head].push_back(edges_.size());
    edges_.push_back(std::move(edge));
    triggers_.emplace_back(rule_index, std::move(homomorphism));
    return true;
}

const std::vector<std::size_t>& Hypergraph::edges_with_head(const Fact& f) const {
    static const std::vector<std::size_t> empty;
    auto it = by_head_.find(f);
    return it == by_head_.end() ? empty : it->second;
}

std::string Hypergraph::export_text() const {
    std::vector<std::string> lines;
    for (const Hyperedge& e : edges_) {
        std::string line = render_fact(e.head) + " <- ";
        for (std::size_t i = 0; i < e.body.size(); ++i) {
            if (i) line += ", ";
            line += render_fact(e.body[i]);
        }
        lines.push_back(std::move(line));
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const std::string& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

std::vector<Fact> DownwardClosure::db_leaves(const Database& db) const {
    std::vector<Fact> out;
    for (const Fact& f : graph.nodes()) {
        if (db.contains(f)) out.push_back(f);
    }
    std::sort(out.begin(), out.end(), fact_less);
    return out;
}

Hypergraph build_gri(const Program&, const Database& db, const FixpointResult& fix) {
    Hypergraph gri;
    for (const Fact& f : db.facts()) gri.add_node(f);
    for (const Fact& f : fix.facts.facts()) gri.add_node(f);
    for (const Instantiation& inst : fix.instantiations) {
        gri.add_hyperedge(inst.head, inst.body, inst.rule_index, inst.homomorphism);
    }
    return gri;
}

DownwardClosure downward_closure(const Hypergraph& gri, const Fact& goal) {
    if (!gri.has_node(goal)) {
        throw GoalNotDerivable("goal is not derivable: " + render_fact(goal));
    }
    FactSet reachable;
    std::deque<Fact> frontier{goal};
    reachable.insert(goal);
    while (!frontier.empty()) {
        Fact current = std::move(frontier.front());
        frontier.pop_front();
        for (std::size_t edge : gri.edges_with_head(current)) {
            for (const Fact& f : gri.hyperedges()[edge].body) {
                if (reachable.insert(f).second) frontier.push_back(f);
            }
        }
    }

    DownwardClosure dc{Hypergraph{}, goal};
    dc.graph.add_node(goal);
    for (const Fact& f : gri.nodes()) {
        if (reachable.count(f)) dc.graph.add_node(f);
    }
    for (std::size_t i = 0; i < gri.hyperedges().size(); ++i) {
        const Hyperedge& e = gri.hyperedges()[i];
        if (!reachable.count(e.head)) continue;
        // Body members are reachable by construction whenever the head is.
        dc.graph.add_hyperedge(e.head, e.body, gri.edge_rule(i), gri.edge_homomorphism(i));
    }
    return dc;
}

}  // namespace whyprov
