#include "whyprov/generators.hpp"

#include <set>
#include <string>

#include "whyprov/errors.hpp"

namespace whyprov {
namespace {

Fact mk(const std::string& pred, std::initializer_list<std::string> args) {
    Fact f{intern(pred), {}};
    for (const std::string& a : args) f.args.push_back(intern(a));
    return f;
}

const char* const k3SatProgram = R"(
R(x) :- Var(x, z, w1), Assign(x, z).
R(x) :- Var(x, w2, z), Assign(x, z).
Assign(x, y) :- C(x, y, w3, w4, w5, w6), Assign(x, y).
Assign(x, y) :- C(w7, w8, x, y, w9, w10), Assign(x, y).
Assign(x, y) :- C(w11, w12, w13, w14, x, y), Assign(x, y).
Assign(x, z) :- Next(x, y, z, w15), R(y).
Assign(x, z) :- Next(x, y, w16, z), R(y).
R(x) :- Last(x).
)";

}  // namespace

ReductionInstance gen_3sat_instance(const Cnf3Formula& phi) {
    if (phi.num_vars < 1 || phi.clauses.empty()) {
        throw Error("formula needs at least one variable and one clause");
    }
    Program program = parse_program(k3SatProgram);

    auto vname = [](int i) { return "v" + std::to_string(i); };
    Database db;
    for (int i = 1; i <= phi.num_vars; ++i) {
        db.insert(mk("Var", {vname(i), "c0", "c1"}));
    }
    for (int i = 1; i < phi.num_vars; ++i) {
        db.insert(mk("Next", {vname(i), vname(i + 1), "c0", "c1"}));
    }
    db.insert(mk("Next", {vname(phi.num_vars), "bullet", "c0", "c1"}));
    db.insert(mk("Last", {"bullet"}));
    for (const auto& clause : phi.clauses) {
        std::vector<std::string> args;
        for (const auto& [var, positive] : clause) {
            args.push_back(vname(var));
            args.push_back(positive ? "c1" : "c0");
        }
        db.insert(mk("C", {args[0], args[1], args[2], args[3], args[4], args[5]}));
    }

    return ReductionInstance{Query{std::move(program), intern("R")}, std::move(db),
                             {intern("v1")}};
}

GeneratedInstance gen_transclosure(std::size_t nodes, std::size_t edges, std::uint64_t seed) {
    if (nodes == 0) throw Error("node count must be positive");
    Program program = parse_program(
        "T(x, y) :- E(x, y).\n"
        "T(x, y) :- T(x, z), E(z, y).\n");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, nodes - 1);
    std::set<std::pair<std::size_t, std::size_t>> arcs;
    std::size_t max_arcs = nodes * (nodes - 1);
    std::size_t want = std::min(edges, max_arcs);
    while (arcs.size() < want) {
        std::size_t a = pick(rng);
        std::size_t b = pick(rng);
        if (a != b) arcs.emplace(a, b);
    }

    Database db;
    auto nname = [](std::size_t i) { return "n" + std::to_string(i + 1); };
    for (const auto& [a, b] : arcs) db.insert(mk("E", {nname(a), nname(b)}));
    return GeneratedInstance{Query{std::move(program), intern("T")}, std::move(db)};
}

GeneratedInstance gen_random_instance(const std::string& profile, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto flip = [&](double p) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
    };

    std::size_t dom = 3 + (rng() % 2);  // 3 or 4 constants
    std::vector<std::string> consts;
    for (std::size_t i = 0; i < dom; ++i) consts.push_back(std::string(1, char('a' + i)));

    std::string text;
    Symbol answer;
    if (profile == "tiny-linear") {
        text += "A(x) :- S(x).\n";
        text += "A(y) :- A(x), E(x, y).\n";
        if (flip(0.5)) text += "A(y) :- A(x), E(y, x).\n";
        if (flip(0.5)) text += "A(x) :- E(x, y), S(y).\n";
        if (flip(0.3)) text += "A(y) :- A(x), E(x, z), E(z, y).\n";
        answer = intern("A");
    } else if (profile == "tiny-nonlinear") {
        text += "T(x, y) :- E(x, y).\n";
        text += "T(x, y) :- T(x, z), T(z, y).\n";
        text += "A(y) :- T(x, y), S(x).\n";
        if (flip(0.5)) text += "A(x) :- T(x, x).\n";
        answer = intern("A");
    } else {
        throw Error("unknown profile: " + profile);
    }
    Program program = parse_program(text);

    Database db;
    for (const std::string& a : consts) {
        for (const std::string& b : consts) {
            if (a != b && flip(0.30)) db.insert(mk("E", {a, b}));
        }
    }
    for (const std::string& a : consts) {
        if (flip(0.4)) db.insert(mk("S", {a}));
    }
    if (db.empty() || !db.contains(mk("S", {consts[0]}))) {
        // Keep instances interesting: always at least one seed and one arc.
        db.insert(mk("S", {consts[0]}));
    }
    bool has_edge = false;
    for (const Fact& f : db.facts()) has_edge |= f.predicate == intern("E");
    if (!has_edge) db.insert(mk("E", {consts[0], consts[1]}));

    return GeneratedInstance{Query{std::move(program), answer}, std::move(db)};
}

Cnf3Formula gen_random_3cnf(int num_vars, int num_clauses, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> var(1, num_vars);
    Cnf3Formula phi;
    phi.num_vars = num_vars;
    for (int c = 0; c < num_clauses; ++c) {
        std::array<std::pair<int, bool>, 3> clause;
        for (auto& lit : clause) lit = {var(rng), (rng() & 1) != 0};
        phi.clauses.push_back(clause);
    }
    return phi;
}

bool brute_force_sat(const Cnf3Formula& phi) {
    for (std::uint64_t mask = 0; mask < (1ull << phi.num_vars); ++mask) {
        bool ok = true;
        for (const auto& clause : phi.clauses) {
            bool sat = false;
            for (const auto& [var, positive] : clause) {
                if (((mask >> (var - 1)) & 1) == (positive ? 1u : 0u)) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

}  // namespace whyprov
