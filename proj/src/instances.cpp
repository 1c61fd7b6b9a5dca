#include "mls/instances.hpp"

#include <algorithm>
#include <cmath>

#include "mls/errors.hpp"
#include "mls/system.hpp"

namespace mls {

InstanceGenerator::InstanceGenerator(std::uint64_t seed, InstanceOptions options)
    : rng_(seed), options_(std::move(options))
{
}

namespace {

int uniform_int(std::mt19937_64& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform01(std::mt19937_64& rng)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

bool separated(const Matrix& nodes, int count, const Vector& p, double min_sep)
{
    for (int j = 0; j < count; ++j)
        if ((nodes.row(j).transpose() - p).norm() < min_sep)
            return false;
    return true;
}

} // namespace

RandomInstance InstanceGenerator::next()
{
    const auto& o = options_;
    for (;;) {
        const int d = uniform_int(rng_, o.min_dim, o.max_dim);
        const int m = uniform_int(rng_, o.min_m, o.max_m);
        const int l = uniform_int(rng_, 1, std::min(m, o.max_l));
        const double alpha = o.alpha_lo * std::pow(o.alpha_hi / o.alpha_lo, uniform01(rng_));
        const WeightFamily family =
            o.families[static_cast<std::size_t>(uniform_int(rng_, 0, static_cast<int>(o.families.size()) - 1))];

        Matrix nodes(m, d);
        for (int i = 0; i < m;) {
            Vector p(d);
            for (int k = 0; k < d; ++k)
                p(k) = uniform01(rng_);
            if (separated(nodes, i, p, o.min_separation))
                nodes.row(i++) = p.transpose();
        }
        if (o.sort_nodes && d == 1)
            std::sort(nodes.data(), nodes.data() + m);

        Vector x(d);
        do {
            for (int k = 0; k < d; ++k)
                x(k) = o.sort_nodes && d == 1 ? nodes(0, 0) + (nodes(m - 1, 0) - nodes(0, 0)) * uniform01(rng_)
                                              : uniform01(rng_);
        } while (!separated(nodes, m, x, o.min_separation));

        std::optional<Vector> values;
        if (o.with_values) {
            Vector v(m);
            for (int i = 0; i < m; ++i)
                v(i) = std::uniform_real_distribution<double>(-1.0, 1.0)(rng_);
            values = v;
        }

        RandomInstance inst{PointSet(nodes, values), BasisSpec::monomial(d, l), WeightSpec{}, x};
        inst.weight.family = family;
        inst.weight.alpha = alpha;

        const auto hyp = check_hypotheses(inst.points, inst.basis, inst.weight);
        bool ok = hyp.constant_in_span && hyp.l_le_m && hyp.full_rank;
        if (ok) {
            try {
                const MlsSystem sys = MlsSystem::build(inst.points, inst.basis, inst.weight, inst.x);
                ok = sys.d_positive() && sys.gram_condition() <= o.max_gram_condition;
            } catch (const DomainError&) {
                ok = false; // weight underflow
            }
        }
        if (ok)
            return inst;
        ++rejected_;
    }
}

Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix a(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            a(i, j) = n(rng);
    return a;
}

Matrix random_symmetric(const Vector& eigenvalues, std::mt19937_64& rng)
{
    const auto n = static_cast<int>(eigenvalues.size());
    Eigen::HouseholderQR<Matrix> qr(random_gaussian(n, n, rng));
    const Matrix q = qr.householderQ();
    Matrix s = q * eigenvalues.asDiagonal() * q.transpose();
    return 0.5 * (s + s.transpose());
}

} // namespace mls
