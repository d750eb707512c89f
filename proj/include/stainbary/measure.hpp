#pragma once

#include <Eigen/Dense>

namespace stainbary {

/// Weighted point cloud in R^d (d = 1, 2 or 3 in application use).
///
/// Rows of `support` are points; `weights` holds one nonnegative mass per
/// point and sums to 1 (within 1e-9). Immutable by convention: operations
/// take measures by const reference and return new ones.
struct DiscreteMeasure {
    Eigen::MatrixXd support;   // n x d
    Eigen::VectorXd weights;   // n

    Eigen::Index size() const { return support.rows(); }
    Eigen::Index dimension() const { return support.cols(); }

    /// Unit point mass at `point`.
    static DiscreteMeasure dirac(const Eigen::VectorXd& point);

    /// Measure with equal weight on every row of `support`.
    static DiscreteMeasure uniform(const Eigen::MatrixXd& support);

    /// Throws InvalidArgument when an invariant is violated: empty support,
    /// non-finite coordinates, negative weights, or mass not summing to 1.
    void validate() const;
};

/// Pairwise squared Euclidean cost, entry (i,j) = |x_i - y_j|^2.
using CostMatrix = Eigen::MatrixXd;

CostMatrix cost_matrix(const Eigen::MatrixXd& sourceSupport,
                       const Eigen::MatrixXd& targetSupport);
CostMatrix cost_matrix(const DiscreteMeasure& source, const DiscreteMeasure& target);

} // namespace stainbary
