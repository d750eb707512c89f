#include "stainbary/sinkhorn.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "stainbary/errors.hpp"

namespace stainbary {

namespace {

constexpr double kMassMismatchTolerance = 1e-9;
constexpr int kConvergenceCheckStride = 10;

// log sum_j exp(X_ij) per row, tolerating all -inf rows (zero-mass columns).
void rowLogSumExp(const Eigen::MatrixXd& X, Eigen::VectorXd& out)
{
    out.resize(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const double m = X.row(i).maxCoeff();
        if (!std::isfinite(m)) {
            out(i) = m;
            continue;
        }
        out(i) = m + std::log((X.row(i).array() - m).exp().sum());
    }
}

void colLogSumExp(const Eigen::MatrixXd& X, Eigen::VectorXd& out)
{
    out.resize(X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double m = X.col(j).maxCoeff();
        if (!std::isfinite(m)) {
            out(j) = m;
            continue;
        }
        out(j) = m + std::log((X.col(j).array() - m).exp().sum());
    }
}

double marginalViolation(const Eigen::MatrixXd& plan,
                         const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    const double rowErr = (plan.rowwise().sum() - a).cwiseAbs().maxCoeff();
    const double colErr = (plan.colwise().sum().transpose() - b).cwiseAbs().maxCoeff();
    return std::max(rowErr, colErr);
}

struct CoreResult {
    Eigen::MatrixXd plan;
    Eigen::VectorXd f, g;
    int iterations = 0;
    bool converged = false;
    double marginalError = 0.0;
};

CoreResult sinkhornLog(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                       const CostMatrix& cost, const SolverConfig& config)
{
    const Eigen::Index n = a.size();
    const Eigen::Index m = b.size();
    const double eps = config.epsilon;

    const Eigen::MatrixXd scaledCost = cost / eps;
    const Eigen::VectorXd logA = a.array().log();
    const Eigen::VectorXd logB = b.array().log();

    Eigen::VectorXd fe = Eigen::VectorXd::Zero(n);  // f / eps
    Eigen::VectorXd ge = Eigen::VectorXd::Zero(m);  // g / eps
    Eigen::MatrixXd work(n, m);
    Eigen::VectorXd lse;

    CoreResult result;
    for (int iter = 1; iter <= config.maxIterations; ++iter) {
        work = (-scaledCost).rowwise() + ge.transpose();
        rowLogSumExp(work, lse);
        fe = logA - lse;

        work = (-scaledCost).colwise() + fe;
        colLogSumExp(work, lse);
        ge = logB - lse;

        if (!fe.allFinite() || !ge.allFinite())
            throw SolverError("sinkhorn: non-finite dual potentials", iter);

        result.iterations = iter;
        if (iter % kConvergenceCheckStride == 0 || iter == config.maxIterations) {
            work = ((-scaledCost).colwise() + fe).rowwise() + ge.transpose();
            result.plan = work.array().exp();
            result.marginalError = marginalViolation(result.plan, a, b);
            if (result.marginalError <= config.tolerance) {
                result.converged = true;
                break;
            }
        }
    }

    if (result.plan.size() == 0) {
        work = ((-scaledCost).colwise() + fe).rowwise() + ge.transpose();
        result.plan = work.array().exp();
        result.marginalError = marginalViolation(result.plan, a, b);
        result.converged = result.marginalError <= config.tolerance;
    }

    result.f = eps * fe;
    result.g = eps * ge;
    return result;
}

CoreResult sinkhornScaling(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                           const CostMatrix& cost, const SolverConfig& config)
{
    const Eigen::Index n = a.size();
    const Eigen::Index m = b.size();
    const double eps = config.epsilon;

    // Scalar std::exp: Eigen's vectorized exp clamps deep underflow to the
    // smallest normal instead of 0, which would turn an underflowed kernel
    // into a uniform one and hide the failure.
    const Eigen::MatrixXd kernel =
        (-cost / eps).unaryExpr([](double x) { return std::exp(x); });
    Eigen::VectorXd u = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(m);

    CoreResult result;
    for (int iter = 1; iter <= config.maxIterations; ++iter) {
        u = a.array() / (kernel * v).array();
        v = b.array() / (kernel.transpose() * u).array();

        if (!u.allFinite() || !v.allFinite())
            throw SolverError("sinkhorn: non-finite scaling vectors, use logDomain or larger epsilon",
                              iter);

        result.iterations = iter;
        if (iter % kConvergenceCheckStride == 0 || iter == config.maxIterations) {
            result.plan = u.asDiagonal() * kernel * v.asDiagonal();
            result.marginalError = marginalViolation(result.plan, a, b);
            if (result.marginalError <= config.tolerance) {
                result.converged = true;
                break;
            }
        }
    }

    if (result.plan.size() == 0) {
        result.plan = u.asDiagonal() * kernel * v.asDiagonal();
        result.marginalError = marginalViolation(result.plan, a, b);
        result.converged = result.marginalError <= config.tolerance;
    }

    result.f = eps * u.array().log();
    result.g = eps * v.array().log();
    return result;
}

} // namespace

void SolverConfig::validate() const
{
    if (!(epsilon > 0.0))
        throw InvalidArgument("SolverConfig: epsilon must be > 0, got " + std::to_string(epsilon));
    if (maxIterations < 1)
        throw InvalidArgument("SolverConfig: maxIterations must be >= 1");
    if (!(tolerance > 0.0))
        throw InvalidArgument("SolverConfig: tolerance must be > 0");
}

SolverConfig relative_config(const CostMatrix& cost, double scale)
{
    if (!(scale > 0.0))
        throw InvalidArgument("relative_config: scale must be > 0");
    SolverConfig config;
    const double maxCost = cost.size() > 0 ? cost.maxCoeff() : 0.0;
    config.epsilon = maxCost > 0.0 ? scale * maxCost : scale;
    return config;
}

double TransportPlan::marginalViolation() const
{
    return stainbary::marginalViolation(matrix, rowMarginal, colMarginal);
}

SinkhornResult sinkhorn(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                        const CostMatrix& cost, const SolverConfig& config)
{
    config.validate();
    if (a.size() != cost.rows() || b.size() != cost.cols())
        throw InvalidArgument("sinkhorn: cost is " + std::to_string(cost.rows()) + "x" +
                              std::to_string(cost.cols()) + " but marginals have " +
                              std::to_string(a.size()) + " and " + std::to_string(b.size()) +
                              " entries");
    if ((a.array() < 0.0).any() || (b.array() < 0.0).any() || !a.allFinite() || !b.allFinite())
        throw InvalidArgument("sinkhorn: marginals must be finite and nonnegative");
    if (std::abs(a.sum() - b.sum()) > kMassMismatchTolerance * std::max(1.0, a.sum()))
        throw InvalidArgument("sinkhorn: marginal masses differ, " + std::to_string(a.sum()) +
                              " vs " + std::to_string(b.sum()));

    // Zero-weight atoms make the scalings undefined; drop them and reinsert
    // zero rows/columns afterwards.
    std::vector<Eigen::Index> rows, cols;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a(i) > 0.0) rows.push_back(i);
    for (Eigen::Index j = 0; j < b.size(); ++j)
        if (b(j) > 0.0) cols.push_back(j);
    if (rows.empty() || cols.empty())
        throw InvalidArgument("sinkhorn: marginals carry no mass");

    const bool filtered = rows.size() != std::size_t(a.size()) ||
                          cols.size() != std::size_t(b.size());

    Eigen::VectorXd as(rows.size()), bs(cols.size());
    Eigen::MatrixXd cs(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        as(Eigen::Index(i)) = a(rows[i]);
        for (std::size_t j = 0; j < cols.size(); ++j)
            cs(Eigen::Index(i), Eigen::Index(j)) = cost(rows[i], cols[j]);
    }
    for (std::size_t j = 0; j < cols.size(); ++j)
        bs(Eigen::Index(j)) = b(cols[j]);

    CoreResult core = config.logDomain ? sinkhornLog(as, bs, cs, config)
                                       : sinkhornScaling(as, bs, cs, config);

    SinkhornResult result;
    result.iterations = core.iterations;
    result.converged = core.converged;
    result.marginalError = core.marginalError;
    result.plan.rowMarginal = a;
    result.plan.colMarginal = b;
    result.plan.regularization = config.epsilon;

    if (!filtered) {
        result.plan.matrix = std::move(core.plan);
        result.potentialSource = std::move(core.f);
        result.potentialTarget = std::move(core.g);
    } else {
        result.plan.matrix = Eigen::MatrixXd::Zero(a.size(), b.size());
        result.potentialSource = Eigen::VectorXd::Zero(a.size());
        result.potentialTarget = Eigen::VectorXd::Zero(b.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            result.potentialSource(rows[i]) = core.f(Eigen::Index(i));
            for (std::size_t j = 0; j < cols.size(); ++j)
                result.plan.matrix(rows[i], cols[j]) = core.plan(Eigen::Index(i), Eigen::Index(j));
        }
        for (std::size_t j = 0; j < cols.size(); ++j)
            result.potentialTarget(cols[j]) = core.g(Eigen::Index(j));
    }
    return result;
}

double transport_cost(const TransportPlan& plan, const CostMatrix& cost)
{
    if (plan.matrix.rows() != cost.rows() || plan.matrix.cols() != cost.cols())
        throw InvalidArgument("transport_cost: plan is " + std::to_string(plan.matrix.rows()) +
                              "x" + std::to_string(plan.matrix.cols()) + " but cost is " +
                              std::to_string(cost.rows()) + "x" + std::to_string(cost.cols()));
    return (plan.matrix.array() * cost.array()).sum();
}

W2Result w2(const DiscreteMeasure& source, const DiscreteMeasure& target,
            const SolverConfig& config)
{
    source.validate();
    target.validate();
    const CostMatrix cost = cost_matrix(source, target);
    W2Result result;
    result.solve = sinkhorn(source.weights, target.weights, cost, config);
    result.distance = std::sqrt(std::max(0.0, transport_cost(result.solve.plan, cost)));
    return result;
}

double w2_distance(const DiscreteMeasure& source, const DiscreteMeasure& target,
                   const SolverConfig& config)
{
    return w2(source, target, config).distance;
}

} // namespace stainbary
