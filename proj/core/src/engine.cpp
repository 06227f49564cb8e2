#include "whyprov/engine.hpp"

#include <algorithm>
#include <limits>

#include "whyprov/errors.hpp"

namespace whyprov {
namespace {

struct PosKey {
    Symbol pred;
    std::uint32_t pos;
    Symbol value;
    friend bool operator==(const PosKey&, const PosKey&) = default;
};

struct PosKeyHash {
    std::size_t operator()(const PosKey& k) const {
        std::size_t h = k.pred;
        h = h * 1000003u + k.pos;
        h = h * 1000003u + k.value;
        return h;
    }
};

/// Index over a fact collection: by predicate, and by (predicate, position,
/// constant) so that joins can seed from the first bound argument.
class FactIndex {
  public:
    void add(const Fact& f) {
        store_.push_back(f);
    }

    void build() {
        by_pred_.clear();
        by_pos_.clear();
        for (std::size_t i = 0; i < store_.size(); ++i) {
            const Fact& f = store_[i];
            by_pred_[f.predicate].push_back(i);
            for (std::uint32_t p = 0; p < f.args.size(); ++p) {
                by_pos_[{f.predicate, p, f.args[p]}].push_back(i);
            }
        }
    }

    const Fact& fact(std::size_t i) const { return store_[i]; }
    std::size_t size() const { return store_.size(); }

    const std::vector<std::size_t>* candidates(Symbol pred) const {
        auto it = by_pred_.find(pred);
        return it == by_pred_.end() ? nullptr : &it->second;
    }

    const std::vector<std::size_t>* candidates(Symbol pred, std::uint32_t pos, Symbol value) const {
        auto it = by_pos_.find({pred, pos, value});
        return it == by_pos_.end() ? nullptr : &it->second;
    }

  private:
    std::vector<Fact> store_;
    std::unordered_map<Symbol, std::vector<std::size_t>> by_pred_;
    std::unordered_map<PosKey, std::vector<std::size_t>, PosKeyHash> by_pos_;
};

using Binding = std::unordered_map<Symbol, Symbol>;  // variable -> constant

bool unify(const Atom& atom, const Fact& f, Binding& binding, std::vector<Symbol>& trail) {
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
}

Fact ground(const Atom& atom, const Binding& binding) {
    Fact f{atom.predicate, {}};
    f.args.reserve(atom.args.size());
    for (const Term& t : atom.args) {
        f.args.push_back(t.is_constant() ? t.sym : binding.at(t.sym));
    }
    return f;
}

/// Enumerates all homomorphisms grounding `body` against `index`. When
/// `delta_atom` is set, that atom is matched against `delta` instead.
void for_each_match(const std::vector<Atom>& body, const FactIndex& index, const FactIndex* delta,
                    std::optional<std::size_t> delta_atom,
                    const std::function<void(const Binding&, const std::vector<Fact>&)>& emit) {
    Binding binding;
    std::vector<Fact> matched(body.size());

    std::function<void(std::size_t)> step = [&](std::size_t i) {
        if (i == body.size()) {
            emit(binding, matched);
            return;
        }
        const Atom& atom = body[i];
        const FactIndex& source = (delta_atom && *delta_atom == i) ? *delta : index;

        // Seed from the first argument that is already bound, if any.
        const std::vector<std::size_t>* cands = nullptr;
        for (std::uint32_t p = 0; p < atom.args.size(); ++p) {
            const Term& t = atom.args[p];
            Symbol value;
            if (t.is_constant()) {
                value = t.sym;
            } else {
                auto it = binding.find(t.sym);
                if (it == binding.end()) continue;
                value = it->second;
            }
            cands = source.candidates(atom.predicate, p, value);
            if (!cands) return;  // no fact matches the bound position
            break;
        }
        if (!cands) {
            cands = source.candidates(atom.predicate);
            if (!cands) return;
        }

        for (std::size_t id : *cands) {
            const Fact& f = source.fact(id);
            std::vector<Symbol> trail;
            if (unify(atom, f, binding, trail)) {
                matched[i] = f;
                step(i + 1);
            }
            for (Symbol v : trail) binding.erase(v);
        }
    };
    step(0);
}

std::vector<std::pair<Symbol, Symbol>> sorted_homomorphism(const Binding& binding) {
    std::vector<std::pair<Symbol, Symbol>> h(binding.begin(), binding.end());
    std::sort(h.begin(), h.end(), [](const auto& a, const auto& b) {
        return symbol_name(a.first) < symbol_name(b.first);
    });
    return h;
}

}  // namespace

std::size_t FixpointResult::rank_of(const Fact& f) const {
    auto it = rank.find(f);
    if (it == rank.end()) throw GoalNotDerivable("fact not in fixpoint: " + render_fact(f));
    return it->second;
}

std::size_t base_size(const Program& p, const Database& db) {
    std::size_t dom = db.active_domain().size();
    std::size_t total = 0;
    auto count_pred = [&](Symbol pred) {
        std::size_t n = 1;
        for (std::size_t i = 0; i < p.arity(pred); ++i) {
            if (dom != 0 && n > std::numeric_limits<std::size_t>::max() / dom) {
                return std::numeric_limits<std::size_t>::max();
            }
            n *= dom;
        }
        return n;
    };
    for (Symbol pred : p.edb()) {
        std::size_t n = count_pred(pred);
        total = (total > std::numeric_limits<std::size_t>::max() - n)
                    ? std::numeric_limits<std::size_t>::max()
                    : total + n;
    }
    for (Symbol pred : p.idb()) {
        std::size_t n = count_pred(pred);
        total = (total > std::numeric_limits<std::size_t>::max() - n)
                    ? std::numeric_limits<std::size_t>::max()
                    : total + n;
    }
    return total;
}

Database immediate_consequence(const Program& p, const Database& db) {
    FactIndex index;
    for (const Fact& f : db.facts()) index.add(f);
    index.build();

    Database out;
    for (const Fact& f : db.facts()) out.insert(f);
    for (const Rule& r : p.rules()) {
        for_each_match(r.body, index, nullptr, std::nullopt,
                       [&](const Binding& binding, const std::vector<Fact>&) {
                           out.insert(ground(r.head, binding));
                       });
    }
    return out;
}

FixpointResult fixpoint(const Program& p, const Database& db, const EngineLimits& limits) {
    FixpointResult result;
    FactIndex index;
    for (const Fact& f : db.facts()) {
        result.facts.insert(f);
        result.rank.emplace(f, 0);
        index.add(f);
    }
    index.build();

    std::size_t max_iter = limits.max_iterations;
    if (max_iter == 0) max_iter = std::max<std::size_t>(base_size(p, db), 1);

    FactIndex delta = index;
    std::size_t iteration = 0;
    while (delta.size() > 0) {
        ++iteration;
        if (iteration > max_iter) {
            throw ResourceLimit("fixpoint exceeded the iteration cap");
        }
        std::vector<Fact> fresh;
        for (const Rule& r : p.rules()) {
            for (std::size_t j = 0; j < r.body.size(); ++j) {
                for_each_match(r.body, index, &delta, j,
                               [&](const Binding& binding, const std::vector<Fact>&) {
                                   Fact head = ground(r.head, binding);
                                   if (result.facts.insert(head)) {
                                       result.rank.emplace(head, iteration);
                                       fresh.push_back(std::move(head));
                                   }
                               });
            }
        }
        if (result.facts.size() > limits.max_facts) {
            throw ResourceLimit("fixpoint exceeded the fact cap");
        }
        delta = FactIndex();
        for (const Fact& f : fresh) {
            delta.add(f);
            index.add(f);
        }
        delta.build();
        index.build();
    }

    // Second pass: record every satisfied instantiation over the fixpoint,
    // since the downward closure needs all hyperedges.
    for (std::size_t ri = 0; ri < p.rules().size(); ++ri) {
        const Rule& r = p.rules()[ri];
        for_each_match(r.body, index, nullptr, std::nullopt,
                       [&](const Binding& binding, const std::vector<Fact>& body_facts) {
                           result.instantiations.push_back(Instantiation{
                               ri, sorted_homomorphism(binding), ground(r.head, binding),
                               body_facts});
                       });
    }
    return result;
}

std::vector<std::vector<Symbol>> answers(const Query& q, const Database& db) {
    FixpointResult fix = fixpoint(q.program, db);
    std::vector<std::vector<Symbol>> out;
    for (const Fact& f : fix.facts.facts()) {
        if (f.predicate == q.answer_predicate) out.push_back(f.args);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::lexicographical_compare(
            a.begin(), a.end(), b.begin(), b.end(),
            [](Symbol x, Symbol y) { return symbol_name(x) < symbol_name(y); });
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace whyprov
