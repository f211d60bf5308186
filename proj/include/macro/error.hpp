#pragma once

#include <stdexcept>
#include <string>

namespace macro {

/// Input failed a precondition (bad spec, bad flag value, inconsistent mode).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Linear solve failed (singular or numerically broken system).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Geometric input too degenerate to process (collinear points, rank-deficient fit).
class DegenerateInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace macro
