#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace whyprov {

// Interned string id. Equality of interned symbols is an integer compare.
using Symbol = std::uint32_t;

// Process-wide interner; thread-safe. Symbols are never released.
Symbol intern(std::string_view text);

// Name of an interned symbol. Aborts on an id that was never handed out.
const std::string& symbol_name(Symbol s);

}  // namespace whyprov
