#pragma once

#include <stdexcept>
#include <string>

namespace mls {

// Input outside the mathematical domain of an operation (negative radius,
// duplicate nodes, m < 2 for a bound, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Dimension or shape requirement violated by the caller.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Basis/weight/CLI configuration that cannot be honoured.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed CSV/JSON input.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A named hypothesis (H1.x / H2.x) does not hold for the given data.
class HypothesisError : public std::runtime_error {
public:
    HypothesisError(std::string item, const std::string& what)
        : std::runtime_error(item + ": " + what), item_(std::move(item)) {}
    const std::string& item() const noexcept { return item_; }

private:
    std::string item_;
};

// The weighted gram matrix E^t D^-1 E is numerically singular.
class ConditioningError : public std::runtime_error {
public:
    explicit ConditioningError(double condition)
        : std::runtime_error("gram matrix ill-conditioned (cond ~ " + std::to_string(condition) + ")"),
          condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

// The evaluation point coincides with node `node` and w(0) = 0, so D is
// singular. The MLS value there is the node value itself.
class InterpolationLimit : public std::runtime_error {
public:
    explicit InterpolationLimit(std::size_t node)
        : std::runtime_error("evaluation point coincides with node " + std::to_string(node) +
                             " where w(0) = 0"),
          node_(node) {}
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

} // namespace mls
