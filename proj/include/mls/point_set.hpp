#pragma once

#include <optional>
#include <vector>

#include "mls/linalg.hpp"

namespace mls {

/// Nodes x_1..x_m in R^d (one per row) with optional sample values.
/// Construction rejects duplicate nodes and mismatched value counts.
class PointSet {
public:
    PointSet(Matrix nodes, std::optional<Vector> values = std::nullopt);

    /// Convenience for d = 1.
    static PointSet line(const std::vector<double>& xs, std::optional<std::vector<double>> values = std::nullopt);

    int dim() const { return static_cast<int>(nodes_.cols()); }
    int size() const { return static_cast<int>(nodes_.rows()); }
    const Matrix& nodes() const { return nodes_; }
    Vector node(int i) const { return nodes_.row(i).transpose(); }

    bool has_values() const { return values_.has_value(); }
    const Vector& values() const;

    /// H2.2: d = 1 and x_1 < ... < x_m.
    bool strictly_increasing() const;

    PointSet with_values(Vector values) const { return PointSet(nodes_, std::move(values)); }

private:
    Matrix nodes_;
    std::optional<Vector> values_;
};

} // namespace mls
