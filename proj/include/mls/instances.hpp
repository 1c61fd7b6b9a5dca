#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mls/basis.hpp"
#include "mls/linalg.hpp"
#include "mls/point_set.hpp"
#include "mls/weight.hpp"

// Seeded generators of random MLS instances and random matrices for the
// property suites. The same seed always yields the same sequence.
namespace mls {

struct RandomInstance {
    PointSet points;
    BasisSpec basis;
    WeightSpec weight;
    Vector x;
};

struct InstanceOptions {
    int min_m = 2;
    int max_m = 10;
    int max_l = 5;
    int min_dim = 1;
    int max_dim = 1;
    double alpha_lo = 0.1; // alpha is log-uniform in [alpha_lo, alpha_hi]
    double alpha_hi = 4.0;
    double min_separation = 1e-3;
    double max_gram_condition = 1e8;
    std::vector<WeightFamily> families{WeightFamily::Exp};
    bool sort_nodes = false; // d = 1 only: x_1 < ... < x_m
    bool with_values = false;
};

class InstanceGenerator {
public:
    InstanceGenerator(std::uint64_t seed, InstanceOptions options = {});

    /// Next instance satisfying H1 with gram condition <= max_gram_condition
    /// at an evaluation point x that is not a node.
    RandomInstance next();

    std::mt19937_64& engine() { return rng_; }
    int rejected() const { return rejected_; }

private:
    std::mt19937_64 rng_;
    InstanceOptions options_;
    int rejected_ = 0;
};

/// Entries i.i.d. standard normal.
Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng);

/// Q diag(eigenvalues) Q^t with Haar-like random orthogonal Q.
Matrix random_symmetric(const Vector& eigenvalues, std::mt19937_64& rng);

} // namespace mls
