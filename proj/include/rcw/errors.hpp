#pragma once

#include <stdexcept>
#include <string>

namespace rcw {

// Base class for all toolkit errors.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input: parameter ranges, malformed config, index out of range.
struct validation_error : error {
    explicit validation_error(const std::string& msg) : error(msg) {}
};

// Requested object exceeds the configured vertex / compute budget.
struct budget_error : error {
    explicit budget_error(const std::string& msg) : error(msg) {}
};

// A ball, walk or kernel support reached the truncation boundary, so the
// statistic would be biased. Callers must enlarge the graph instead.
struct boundary_error : error {
    explicit boundary_error(const std::string& msg) : error(msg) {}
};

}  // namespace rcw
