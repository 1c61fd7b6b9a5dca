#include "mls/point_set.hpp"

#include "mls/errors.hpp"

namespace mls {

PointSet::PointSet(Matrix nodes, std::optional<Vector> values)
    : nodes_(std::move(nodes)), values_(std::move(values))
{
    if (nodes_.cols() < 1)
        throw DomainError("point set dimension must be positive");
    if (nodes_.rows() < 1)
        throw DomainError("point set must contain at least one node");
    if (!nodes_.allFinite())
        throw DomainError("node coordinates must be finite");
    if (values_ && values_->size() != nodes_.rows())
        throw DomainError("value count " + std::to_string(values_->size()) + " does not match node count " +
                          std::to_string(nodes_.rows()));
    for (Eigen::Index i = 0; i < nodes_.rows(); ++i)
        for (Eigen::Index j = i + 1; j < nodes_.rows(); ++j)
            if (nodes_.row(i) == nodes_.row(j))
                throw DomainError("duplicate nodes " + std::to_string(i) + " and " + std::to_string(j));
}

PointSet PointSet::line(const std::vector<double>& xs, std::optional<std::vector<double>> values)
{
    Matrix nodes(static_cast<Eigen::Index>(xs.size()), 1);
    for (std::size_t i = 0; i < xs.size(); ++i)
        nodes(static_cast<Eigen::Index>(i), 0) = xs[i];
    if (!values)
        return PointSet(std::move(nodes));
    return PointSet(std::move(nodes), Eigen::Map<const Vector>(values->data(), static_cast<Eigen::Index>(values->size())));
}

const Vector& PointSet::values() const
{
    if (!values_)
        throw DomainError("point set carries no sample values");
    return *values_;
}

bool PointSet::strictly_increasing() const
{
    if (dim() != 1)
        return false;
    for (Eigen::Index i = 1; i < nodes_.rows(); ++i)
        if (!(nodes_(i - 1, 0) < nodes_(i, 0)))
            return false;
    return true;
}

} // namespace mls
