#ifndef VDCLAB_ERRORS_HPP
#define VDCLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vdclab {

// Violated operation contract (bad arguments, dimension mismatch, mode misuse).
class ContractError : public std::invalid_argument {
public:
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// Enumeration would exceed the configured point budget.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// A geometric hypothesis required by an operation failed at runtime
// (wrong codimension, singular reduction, dependent linear forms, ...).
class HypothesisError : public std::runtime_error {
public:
    explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

// The two dimension estimators disagree and no larger extension is affordable.
class DimensionAmbiguous : public std::runtime_error {
public:
    explicit DimensionAmbiguous(const std::string& what) : std::runtime_error(what) {}
};

// A deterministic search exhausted its window/height bound.
class SearchExhausted : public std::runtime_error {
public:
    explicit SearchExhausted(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vdclab

#endif
