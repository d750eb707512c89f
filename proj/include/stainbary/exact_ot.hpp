#pragma once

#include "stainbary/measure.hpp"
#include "stainbary/sinkhorn.hpp"

namespace stainbary {

/// Largest instance (n*m) exact_ot_small accepts.
inline constexpr Eigen::Index kExactOtMaxCells = 64;

/// Exact optimal coupling of the unregularized transport problem, solved
/// with the transportation simplex. Intended as an oracle for small
/// instances; throws InvalidArgument when n*m > kExactOtMaxCells.
/// The returned plan has regularization = 0.
TransportPlan exact_ot_small(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             const CostMatrix& cost);

} // namespace stainbary
