#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bioen {

/// A series or quadrature failed to reach the requested tolerance.
/// `estimate` carries the best value achieved so far.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double estimate)
        : std::runtime_error(what), estimate(estimate) {}
    double estimate;
};

/// A series generator produced a non-finite term at `index`.
class SeriesEvaluationError : public std::runtime_error {
public:
    SeriesEvaluationError(const std::string& what, std::size_t index)
        : std::runtime_error(what), index(index) {}
    std::size_t index;
};

/// Construction of a structured matrix hit a singular configuration
/// (duplicate nodes, vanishing denominator). Message names the indices.
class SingularityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Triangular decomposition failed; `order` is the leading dimension whose
/// principal minor vanished.
class DecompositionError : public std::runtime_error {
public:
    DecompositionError(const std::string& what, int order)
        : std::runtime_error(what), order(order) {}
    int order;
};

} // namespace bioen
