#pragma once

#include <Eigen/Dense>

#include "stainbary/measure.hpp"

namespace stainbary {

/// Default entropic regularization as a fraction of the largest cost entry.
inline constexpr double kDefaultEpsilonScale = 0.01;

struct SolverConfig {
    double epsilon = 0.0;      // entropic regularization in squared-cost units, > 0
    int maxIterations = 20000;
    double tolerance = 1e-8;   // L_inf marginal violation at convergence
    bool logDomain = true;     // log-domain stabilization, safe for small epsilon

    void validate() const;
};

/// Config with epsilon = scale * max(cost). Zero max cost (all points
/// coincide) falls back to epsilon = scale so the config stays valid.
SolverConfig relative_config(const CostMatrix& cost, double scale = kDefaultEpsilonScale);

/// Coupling between two discrete measures. `regularization` records the
/// epsilon that produced it; 0 means exact (unregularized LP).
struct TransportPlan {
    Eigen::MatrixXd matrix;        // n x m, nonnegative
    Eigen::VectorXd rowMarginal;   // n
    Eigen::VectorXd colMarginal;   // m
    double regularization = 0.0;

    /// Largest violation of the marginal constraints, max over rows and columns.
    double marginalViolation() const;
};

struct SinkhornResult {
    TransportPlan plan;
    Eigen::VectorXd potentialSource;  // dual potential f, plan = exp((f_i + g_j - C_ij)/eps)
    Eigen::VectorXd potentialTarget;  // dual potential g
    int iterations = 0;
    bool converged = false;
    double marginalError = 0.0;       // L_inf violation at exit
};

/// Entropic OT between weight vectors `a` (rows) and `b` (columns) under
/// `cost`. Zero-weight atoms are dropped before solving and reinserted as
/// zero rows/columns in the returned plan. Throws SolverError if the
/// iterates turn non-finite (possible with logDomain = false and small
/// epsilon); non-convergence within maxIterations is reported through the
/// `converged` flag, not an error.
SinkhornResult sinkhorn(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                        const CostMatrix& cost, const SolverConfig& config);

/// <plan, cost> = sum_ij plan_ij * cost_ij.
double transport_cost(const TransportPlan& plan, const CostMatrix& cost);

struct W2Result {
    double distance = 0.0;   // sqrt of the entropic transport cost
    SinkhornResult solve;
};

W2Result w2(const DiscreteMeasure& source, const DiscreteMeasure& target,
            const SolverConfig& config);

double w2_distance(const DiscreteMeasure& source, const DiscreteMeasure& target,
                   const SolverConfig& config);

} // namespace stainbary
