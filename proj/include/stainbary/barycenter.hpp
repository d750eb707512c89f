#pragma once

#include <vector>

#include "stainbary/measure.hpp"
#include "stainbary/sinkhorn.hpp"

namespace stainbary {

enum class SupportStrategy {
    UnionOfInputs,   // concatenated input supports, deduplicated
    FixedGrid,       // regular grid over the bounding box of the inputs
    SourceSupport,   // support of measures[0]
};

/// Fixed-support entropic barycenter problem over N measures.
/// measures[0] is the source, the last entry the final target.
struct BarycenterProblem {
    std::vector<DiscreteMeasure> measures;
    Eigen::VectorXd weights;                    // lambda, on the simplex
    SupportStrategy supportStrategy = SupportStrategy::UnionOfInputs;
    int gridResolution = 0;                     // points per axis, FixedGrid only
    SolverConfig solver;                        // epsilon in absolute units
    double epsilonScale = 0.0;                  // when > 0: epsilon = scale * max cost entry

    void validate() const;
};

struct BarycenterResult {
    DiscreteMeasure barycenter;
    int iterations = 0;
    bool converged = false;
    /// Entropic objective recorded once per outer iteration (the negated
    /// dual of the smoothed problem); non-increasing by construction.
    std::vector<double> objective;
};

/// Weights minimizing the entropic surrogate of sum_i lambda_i W2^2(mu_i, mu)
/// over the support chosen by the strategy, via iterative Bregman projections
/// in the log domain. Measures with lambda_i = 0 are ignored.
BarycenterResult solve_barycenter(const BarycenterProblem& problem);

enum class ScheduleMode {
    PairwiseGeodesic,  // (1-t, 0, ..., 0, t) between first and last vertex
    SimplexPath,       // piecewise-linear sweep across the vertex sequence
    Uniform,           // 1/N everywhere, independent of t
};

/// Mapping from the interpolation parameter t to a weight vector on the
/// simplex. `vertices` orders the marginals a path-style schedule traverses;
/// empty means 0..N-1.
struct WeightSchedule {
    ScheduleMode mode = ScheduleMode::Uniform;
    std::vector<int> vertices;
};

Eigen::VectorXd schedule_weights(const WeightSchedule& schedule, double t, int marginals);

/// Support points moved a fraction t from the plan's source positions toward
/// their barycentric projections: (1-t) x_i + t (sum_j plan_ij y_j) / a_i.
/// Zero-mass rows stay at their source positions.
Eigen::MatrixXd interpolate_map(const TransportPlan& plan,
                                const Eigen::MatrixXd& sourceSupport,
                                const Eigen::MatrixXd& targetSupport, double t);

/// Push-forward of `source` along the displacement x -> (1-t) x + t T(x),
/// with T the barycentric projection of the Sinkhorn plan. t = 0 returns the
/// source unchanged.
DiscreteMeasure displacement_interpolation(const DiscreteMeasure& source,
                                           const DiscreteMeasure& target,
                                           double t, const SolverConfig& config);

/// Displacement interpolation sampled at steps evenly spaced t values in
/// [0, 1], sharing one transport plan. path[0] is the source, bit-identical.
std::vector<DiscreteMeasure> interpolation_path(const DiscreteMeasure& source,
                                                const DiscreteMeasure& target,
                                                int steps, const SolverConfig& config);

/// Support construction helpers (exposed for tests and the transfer pipeline).
Eigen::MatrixXd union_support(const std::vector<DiscreteMeasure>& measures,
                              double mergeRadius = 1e-9);
Eigen::MatrixXd grid_support(const std::vector<DiscreteMeasure>& measures, int resolution);

} // namespace stainbary
