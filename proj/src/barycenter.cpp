#include "stainbary/barycenter.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "stainbary/errors.hpp"

namespace stainbary {

namespace {

constexpr double kSimplexTolerance = 1e-9;
constexpr Eigen::Index kMaxGridPoints = 200000;

// Order-independent accumulation: summing values in sorted order makes the
// result invariant under permutations of the measure list.
double sortedSum(std::array<double, 8>& terms, int count)
{
    std::sort(terms.begin(), terms.begin() + count);
    double sum = 0.0;
    for (int i = 0; i < count; ++i)
        sum += terms[i];
    return sum;
}

// log sum_k exp((g_k - C_jk)/eps) for every support row j.
void potentialLse(const Eigen::MatrixXd& scaledCost, const Eigen::VectorXd& ge,
                  Eigen::VectorXd& out)
{
    const Eigen::Index n = scaledCost.rows();
    out.resize(n);
    Eigen::RowVectorXd row(scaledCost.cols());
    for (Eigen::Index j = 0; j < n; ++j) {
        row = ge.transpose() - scaledCost.row(j);
        const double m = row.maxCoeff();
        out(j) = std::isfinite(m) ? m + std::log((row.array() - m).exp().sum()) : m;
    }
}

// log sum_j exp((f_j - C_jk)/eps) for every atom column k.
void marginalLse(const Eigen::MatrixXd& scaledCost, const Eigen::VectorXd& fe,
                 Eigen::VectorXd& out)
{
    const Eigen::Index m = scaledCost.cols();
    out.resize(m);
    Eigen::VectorXd col(scaledCost.rows());
    for (Eigen::Index k = 0; k < m; ++k) {
        col = fe - scaledCost.col(k);
        const double mx = col.maxCoeff();
        out(k) = std::isfinite(mx) ? mx + std::log((col.array() - mx).exp().sum()) : mx;
    }
}

} // namespace

void BarycenterProblem::validate() const
{
    if (measures.size() < 2)
        throw InvalidArgument("BarycenterProblem: needs at least 2 measures, got " +
                              std::to_string(measures.size()));
    if (weights.size() != Eigen::Index(measures.size()))
        throw InvalidArgument("BarycenterProblem: " + std::to_string(measures.size()) +
                              " measures but " + std::to_string(weights.size()) + " weights");
    if ((weights.array() < 0.0).any() || std::abs(weights.sum() - 1.0) > kSimplexTolerance)
        throw InvalidArgument("BarycenterProblem: weights must be nonnegative and sum to 1");
    const Eigen::Index d = measures.front().dimension();
    for (const DiscreteMeasure& m : measures) {
        m.validate();
        if (m.dimension() != d)
            throw InvalidArgument("BarycenterProblem: measures mix dimensions " +
                                  std::to_string(d) + " and " + std::to_string(m.dimension()));
    }
    if (supportStrategy == SupportStrategy::FixedGrid && gridResolution < 1)
        throw InvalidArgument("BarycenterProblem: FixedGrid requires gridResolution >= 1");
    if (epsilonScale <= 0.0)
        solver.validate();
}

Eigen::MatrixXd union_support(const std::vector<DiscreteMeasure>& measures, double mergeRadius)
{
    Eigen::Index total = 0;
    for (const DiscreteMeasure& m : measures)
        total += m.size();
    const Eigen::Index d = measures.front().dimension();

    Eigen::MatrixXd points(total, d);
    Eigen::Index count = 0;
    const double radiusSq = mergeRadius * mergeRadius;
    for (const DiscreteMeasure& m : measures) {
        for (Eigen::Index i = 0; i < m.size(); ++i) {
            bool duplicate = false;
            for (Eigen::Index p = 0; p < count && !duplicate; ++p)
                duplicate = (points.row(p) - m.support.row(i)).squaredNorm() <= radiusSq;
            if (!duplicate)
                points.row(count++) = m.support.row(i);
        }
    }
    return points.topRows(count);
}

Eigen::MatrixXd grid_support(const std::vector<DiscreteMeasure>& measures, int resolution)
{
    if (resolution < 1)
        throw InvalidArgument("grid_support: resolution must be >= 1");
    const Eigen::Index d = measures.front().dimension();

    Eigen::VectorXd lo = measures.front().support.colwise().minCoeff();
    Eigen::VectorXd hi = measures.front().support.colwise().maxCoeff();
    for (const DiscreteMeasure& m : measures) {
        lo = lo.cwiseMin(m.support.colwise().minCoeff().transpose());
        hi = hi.cwiseMax(m.support.colwise().maxCoeff().transpose());
    }

    Eigen::Index total = 1;
    for (Eigen::Index k = 0; k < d; ++k) {
        total *= resolution;
        if (total > kMaxGridPoints)
            throw InvalidArgument("grid_support: grid would exceed " +
                                  std::to_string(kMaxGridPoints) + " points");
    }

    Eigen::MatrixXd points(total, d);
    for (Eigen::Index idx = 0; idx < total; ++idx) {
        Eigen::Index rest = idx;
        for (Eigen::Index k = d - 1; k >= 0; --k) {
            const Eigen::Index step = rest % resolution;
            rest /= resolution;
            points(idx, k) = resolution == 1
                                 ? 0.5 * (lo(k) + hi(k))
                                 : lo(k) + (hi(k) - lo(k)) * double(step) / double(resolution - 1);
        }
    }
    return points;
}

BarycenterResult solve_barycenter(const BarycenterProblem& problem)
{
    problem.validate();

    // Marginals with zero weight do not enter the objective.
    std::vector<const DiscreteMeasure*> active;
    std::vector<double> lambda;
    for (std::size_t i = 0; i < problem.measures.size(); ++i) {
        if (problem.weights(Eigen::Index(i)) > 0.0) {
            active.push_back(&problem.measures[i]);
            lambda.push_back(problem.weights(Eigen::Index(i)));
        }
    }
    const int N = int(active.size());

    Eigen::MatrixXd support;
    switch (problem.supportStrategy) {
    case SupportStrategy::UnionOfInputs:
        support = union_support(problem.measures);
        break;
    case SupportStrategy::FixedGrid:
        support = grid_support(problem.measures, problem.gridResolution);
        break;
    case SupportStrategy::SourceSupport:
        support = problem.measures.front().support;
        break;
    }
    const Eigen::Index n = support.rows();
    if (n == 0)
        throw InvalidArgument("solve_barycenter: empty barycenter support");

    std::vector<Eigen::MatrixXd> scaledCost(N);
    double maxCost = 0.0;
    for (int i = 0; i < N; ++i) {
        scaledCost[i] = cost_matrix(support, active[std::size_t(i)]->support);
        maxCost = std::max(maxCost, scaledCost[i].size() ? scaledCost[i].maxCoeff() : 0.0);
    }

    SolverConfig config = problem.solver;
    if (problem.epsilonScale > 0.0)
        config.epsilon = maxCost > 0.0 ? problem.epsilonScale * maxCost : problem.epsilonScale;
    config.validate();
    const double eps = config.epsilon;
    for (Eigen::MatrixXd& c : scaledCost)
        c /= eps;

    const std::size_t count = std::size_t(N);
    std::vector<Eigen::VectorXd> fe(count), ge(count), lse(count), logMarginal(count);
    for (int i = 0; i < N; ++i) {
        fe[std::size_t(i)] = Eigen::VectorXd::Zero(n);
        ge[std::size_t(i)] = Eigen::VectorXd::Zero(active[std::size_t(i)]->size());
        logMarginal[std::size_t(i)] = active[std::size_t(i)]->weights.array().log();
    }

    BarycenterResult result;
    Eigen::VectorXd logMu = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd mu = Eigen::VectorXd::Constant(n, 1.0 / double(n));
    Eigen::VectorXd muPrev = mu;
    std::array<double, 8> terms{};

    for (int iter = 1; iter <= config.maxIterations; ++iter) {
        // Column scalings: match each marginal exactly given current f.
        for (int i = 0; i < N; ++i) {
            marginalLse(scaledCost[std::size_t(i)], fe[std::size_t(i)], lse[std::size_t(i)]);
            ge[std::size_t(i)] = logMarginal[std::size_t(i)] - lse[std::size_t(i)];
        }
        // Shared row marginal: weighted geometric mean of the projections.
        for (int i = 0; i < N; ++i)
            potentialLse(scaledCost[std::size_t(i)], ge[std::size_t(i)], lse[std::size_t(i)]);
        for (Eigen::Index j = 0; j < n; ++j) {
            for (int i = 0; i < N; ++i)
                terms[std::size_t(i)] = lambda[std::size_t(i)] * lse[std::size_t(i)](j);
            logMu(j) = sortedSum(terms, N);
        }
        for (int i = 0; i < N; ++i)
            fe[std::size_t(i)] = logMu - lse[std::size_t(i)];

        for (int i = 0; i < N; ++i)
            if (!fe[std::size_t(i)].allFinite())
                throw SolverError("solve_barycenter: non-finite potentials", iter);

        // Dual of the entropic surrogate; each sweep is exact block-coordinate
        // ascent, so recording its negation gives a non-increasing objective.
        double dual = 0.0;
        for (int i = 0; i < N; ++i) {
            const Eigen::VectorXd& b = active[std::size_t(i)]->weights;
            double inner = 0.0;
            for (Eigen::Index k = 0; k < b.size(); ++k)
                if (b(k) > 0.0)
                    inner += eps * ge[std::size_t(i)](k) * b(k);
            terms[std::size_t(i)] = lambda[std::size_t(i)] * inner;
        }
        dual = sortedSum(terms, N) - eps * logMu.array().exp().sum();
        result.objective.push_back(-dual);

        mu = logMu.array().exp();
        const double mass = mu.sum();
        if (mass <= 0.0 || !std::isfinite(mass))
            throw SolverError("solve_barycenter: degenerate barycenter mass", iter);
        mu /= mass;

        result.iterations = iter;
        if ((mu - muPrev).cwiseAbs().sum() <= config.tolerance) {
            result.converged = true;
            break;
        }
        muPrev = mu;
    }

    result.barycenter.support = std::move(support);
    result.barycenter.weights = std::move(mu);
    return result;
}

Eigen::VectorXd schedule_weights(const WeightSchedule& schedule, double t, int marginals)
{
    if (marginals < 2)
        throw InvalidArgument("schedule_weights: need at least 2 marginals");
    if (!(t >= 0.0 && t <= 1.0))
        throw InvalidArgument("schedule_weights: t = " + std::to_string(t) +
                              " outside [0, 1]");

    std::vector<int> vertices = schedule.vertices;
    if (vertices.empty()) {
        vertices.resize(std::size_t(marginals));
        for (int i = 0; i < marginals; ++i)
            vertices[std::size_t(i)] = i;
    }
    for (int v : vertices)
        if (v < 0 || v >= marginals)
            throw InvalidArgument("schedule_weights: vertex index " + std::to_string(v) +
                                  " out of range");

    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(marginals);
    switch (schedule.mode) {
    case ScheduleMode::Uniform:
        lambda.setConstant(1.0 / double(marginals));
        break;
    case ScheduleMode::PairwiseGeodesic: {
        if (vertices.size() < 2 || vertices.front() == vertices.back())
            throw InvalidArgument("schedule_weights: PairwiseGeodesic needs distinct endpoints");
        lambda(vertices.front()) = 1.0 - t;
        lambda(vertices.back()) = t;
        break;
    }
    case ScheduleMode::SimplexPath: {
        if (vertices.size() < 2)
            throw InvalidArgument("schedule_weights: SimplexPath needs at least 2 vertices");
        const int legs = int(vertices.size()) - 1;
        if (t >= 1.0) {
            lambda(vertices.back()) = 1.0;
            break;
        }
        const double position = t * legs;
        const int leg = std::min(int(position), legs - 1);
        const double s = position - leg;
        lambda(vertices[std::size_t(leg)]) += 1.0 - s;
        lambda(vertices[std::size_t(leg) + 1]) += s;
        break;
    }
    }
    return lambda;
}

Eigen::MatrixXd interpolate_map(const TransportPlan& plan,
                                const Eigen::MatrixXd& sourceSupport,
                                const Eigen::MatrixXd& targetSupport, double t)
{
    if (plan.matrix.rows() != sourceSupport.rows() || plan.matrix.cols() != targetSupport.rows())
        throw InvalidArgument("interpolate_map: plan does not match the supports");

    Eigen::MatrixXd mapped(sourceSupport.rows(), sourceSupport.cols());
    for (Eigen::Index i = 0; i < sourceSupport.rows(); ++i) {
        const double mass = plan.rowMarginal(i);
        if (mass > 0.0) {
            const Eigen::RowVectorXd projection =
                (plan.matrix.row(i) * targetSupport) / mass;
            mapped.row(i) = (1.0 - t) * sourceSupport.row(i) + t * projection;
        } else {
            mapped.row(i) = sourceSupport.row(i);
        }
    }
    return mapped;
}

DiscreteMeasure displacement_interpolation(const DiscreteMeasure& source,
                                           const DiscreteMeasure& target,
                                           double t, const SolverConfig& config)
{
    if (!(t >= 0.0 && t <= 1.0))
        throw InvalidArgument("displacement_interpolation: t = " + std::to_string(t) +
                              " outside [0, 1]");
    source.validate();
    target.validate();
    if (t == 0.0)
        return source;

    const CostMatrix cost = cost_matrix(source, target);
    const SinkhornResult solve = sinkhorn(source.weights, target.weights, cost, config);

    DiscreteMeasure interpolated;
    interpolated.support = interpolate_map(solve.plan, source.support, target.support, t);
    interpolated.weights = source.weights;
    return interpolated;
}

std::vector<DiscreteMeasure> interpolation_path(const DiscreteMeasure& source,
                                                const DiscreteMeasure& target,
                                                int steps, const SolverConfig& config)
{
    if (steps < 2)
        throw InvalidArgument("interpolation_path: steps must be >= 2");
    source.validate();
    target.validate();

    const CostMatrix cost = cost_matrix(source, target);
    const SinkhornResult solve = sinkhorn(source.weights, target.weights, cost, config);

    std::vector<DiscreteMeasure> path;
    path.reserve(std::size_t(steps));
    path.push_back(source);
    for (int k = 1; k < steps; ++k) {
        const double t = double(k) / double(steps - 1);
        DiscreteMeasure m;
        m.support = interpolate_map(solve.plan, source.support, target.support, t);
        m.weights = source.weights;
        path.push_back(std::move(m));
    }
    return path;
}

} // namespace stainbary
