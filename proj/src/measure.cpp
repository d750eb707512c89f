#include "stainbary/measure.hpp"

#include <cmath>
#include <string>

#include "stainbary/errors.hpp"

namespace stainbary {

namespace {
constexpr double kMassTolerance = 1e-9;
}

DiscreteMeasure DiscreteMeasure::dirac(const Eigen::VectorXd& point)
{
    DiscreteMeasure m;
    m.support = point.transpose();
    m.weights = Eigen::VectorXd::Ones(1);
    return m;
}

DiscreteMeasure DiscreteMeasure::uniform(const Eigen::MatrixXd& support)
{
    DiscreteMeasure m;
    m.support = support;
    m.weights = Eigen::VectorXd::Constant(support.rows(), 1.0 / double(support.rows()));
    return m;
}

void DiscreteMeasure::validate() const
{
    if (support.rows() == 0)
        throw InvalidArgument("measure has empty support");
    if (weights.size() != support.rows())
        throw InvalidArgument("measure has " + std::to_string(support.rows()) +
                              " support points but " + std::to_string(weights.size()) + " weights");
    if (!support.allFinite())
        throw InvalidArgument("measure support contains NaN or Inf");
    if (!weights.allFinite() || (weights.array() < 0.0).any())
        throw InvalidArgument("measure weights must be finite and nonnegative");
    const double mass = weights.sum();
    if (std::abs(mass - 1.0) > kMassTolerance)
        throw InvalidArgument("measure weights sum to " + std::to_string(mass) + ", expected 1");
}

CostMatrix cost_matrix(const Eigen::MatrixXd& sourceSupport,
                       const Eigen::MatrixXd& targetSupport)
{
    if (sourceSupport.cols() != targetSupport.cols())
        throw InvalidArgument("cost_matrix: dimension mismatch, source is in R^" +
                              std::to_string(sourceSupport.cols()) + " but target is in R^" +
                              std::to_string(targetSupport.cols()));

    const Eigen::Index n = sourceSupport.rows();
    const Eigen::Index m = targetSupport.rows();
    CostMatrix cost(n, m);
    for (Eigen::Index i = 0; i < n; ++i)
        cost.row(i) = (targetSupport.rowwise() - sourceSupport.row(i)).rowwise().squaredNorm().transpose();
    return cost;
}

CostMatrix cost_matrix(const DiscreteMeasure& source, const DiscreteMeasure& target)
{
    return cost_matrix(source.support, target.support);
}

} // namespace stainbary
