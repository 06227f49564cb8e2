#pragma once

#include <stdexcept>
#include <string>

namespace whyprov {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input / parsing errors.
struct SyntaxError : Error {
    int line;
    int col;
    SyntaxError(int line_, int col_, const std::string& what_)
        : Error("syntax error at " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + what_),
          line(line_),
          col(col_) {}
};

struct SafetyViolation : Error {
    int rule_index;
    std::string variable;
    SafetyViolation(int rule_index_, const std::string& variable_)
        : Error("unsafe rule " + std::to_string(rule_index_) + ": head variable '" + variable_ +
                "' does not occur in the body"),
          rule_index(rule_index_),
          variable(variable_) {}
};

struct ArityMismatch : Error {
    std::string predicate;
    explicit ArityMismatch(const std::string& predicate_)
        : Error("inconsistent arity for predicate '" + predicate_ + "'"), predicate(predicate_) {}
};

struct UnknownPredicate : Error {
    std::string predicate;
    explicit UnknownPredicate(const std::string& predicate_)
        : Error("unknown predicate '" + predicate_ + "'"), predicate(predicate_) {}
};

struct IdbFactInInput : Error {
    std::string predicate;
    explicit IdbFactInInput(const std::string& predicate_)
        : Error("fact over intensional predicate '" + predicate_ + "' in input database"),
          predicate(predicate_) {}
};

// Evaluation / pipeline errors.
struct ResourceLimit : Error {
    using Error::Error;
};

struct GoalNotDerivable : Error {
    using Error::Error;
};

struct OracleTooLarge : Error {
    using Error::Error;
};

struct EncodingTooLarge : Error {
    using Error::Error;
};

struct NotASubset : Error {
    using Error::Error;
};

struct SolverTimeout : Error {
    using Error::Error;
};

}  // namespace whyprov
