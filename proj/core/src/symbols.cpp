#include "whyprov/symbols.hpp"

#include <cassert>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace whyprov {
namespace {

struct Interner {
    std::shared_mutex mutex;
    std::unordered_map<std::string_view, Symbol> ids;
    std::deque<std::string> names;  // deque: stable addresses for string_view keys
};

Interner& interner() {
    static Interner instance;
    return instance;
}

}  // namespace

Symbol intern(std::string_view text) {
    Interner& in = interner();
    {
        std::shared_lock lock(in.mutex);
        auto it = in.ids.find(text);
        if (it != in.ids.end()) return it->second;
    }
    std::unique_lock lock(in.mutex);
    auto it = in.ids.find(text);
    if (it != in.ids.end()) return it->second;
    in.names.emplace_back(text);
    Symbol id = static_cast<Symbol>(in.names.size() - 1);
    in.ids.emplace(in.names.back(), id);
    return id;
}

const std::string& symbol_name(Symbol s) {
    Interner& in = interner();
    std::shared_lock lock(in.mutex);
    assert(s < in.names.size());
    return in.names[s];
}

}  // namespace whyprov
