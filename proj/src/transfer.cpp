#include "stainbary/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "stainbary/errors.hpp"

namespace stainbary {

namespace {

SolverConfig configFor(const NormalizationRequest& request, const CostMatrix& cost)
{
    SolverConfig config = request.solver;
    const double maxCost = cost.size() > 0 ? cost.maxCoeff() : 0.0;
    config.epsilon = maxCost > 0.0 ? request.epsilonScale * maxCost : request.epsilonScale;
    return config;
}

AugmentedFrame sourceFrame(const NormalizationRequest& request, double t)
{
    AugmentedFrame frame;
    frame.t = t;
    frame.image = request.source;
    return frame;
}

AugmentedFrame renderFrame(const ColorPalette& sourcePalette,
                           const Eigen::MatrixXd& mappedSupport, double t)
{
    AugmentedFrame frame;
    frame.t = t;
    ReconstructedImage rebuilt = reconstruct(sourcePalette, mappedSupport);
    frame.image = std::move(rebuilt.image);
    frame.gamutClipped = rebuilt.gamutClipped;
    return frame;
}

} // namespace

void NormalizationRequest::validate() const
{
    if (source.empty())
        throw InvalidArgument("NormalizationRequest: empty source image");
    if (references.empty() || references.size() > 3)
        throw InvalidArgument("NormalizationRequest: need 1 to 3 references, got " +
                              std::to_string(references.size()));
    for (const Image& ref : references)
        if (ref.empty())
            throw InvalidArgument("NormalizationRequest: empty reference image");
    if (tSamples.empty())
        throw InvalidArgument("NormalizationRequest: tSamples is empty");
    if (!std::is_sorted(tSamples.begin(), tSamples.end()))
        throw InvalidArgument("NormalizationRequest: tSamples must be sorted");
    for (double t : tSamples)
        if (!(t >= 0.0 && t <= 1.0))
            throw InvalidArgument("NormalizationRequest: t = " + std::to_string(t) +
                                  " outside [0, 1]");
    if (paletteSize < 1)
        throw InvalidArgument("NormalizationRequest: paletteSize must be >= 1");
    if (!(epsilonScale > 0.0))
        throw InvalidArgument("NormalizationRequest: epsilonScale must be > 0");
}

Eigen::MatrixXd barycentric_map(const TransportPlan& plan,
                                const Eigen::MatrixXd& targetSupport)
{
    if (plan.matrix.cols() != targetSupport.rows())
        throw InvalidArgument("barycentric_map: plan has " + std::to_string(plan.matrix.cols()) +
                              " columns but target support has " +
                              std::to_string(targetSupport.rows()) + " points");
    for (Eigen::Index i = 0; i < plan.rowMarginal.size(); ++i)
        if (!(plan.rowMarginal(i) > 0.0))
            throw InvalidArgument("barycentric_map: zero row marginal at index " +
                                  std::to_string(i));

    Eigen::MatrixXd mapped(plan.matrix.rows(), targetSupport.cols());
    for (Eigen::Index i = 0; i < plan.matrix.rows(); ++i)
        mapped.row(i) = (plan.matrix.row(i) * targetSupport) / plan.rowMarginal(i);
    return mapped;
}

std::vector<AugmentedFrame> augment(const NormalizationRequest& request)
{
    request.validate();

    const std::size_t refCount = request.references.size();
    const int marginals = int(refCount) + 1;

    const ColorPalette sourcePalette =
        extract_palette(request.source, request.paletteSize, request.seed);

    std::vector<DiscreteMeasure> measures;
    measures.reserve(refCount + 1);
    measures.push_back(sourcePalette.measure);
    for (std::size_t i = 0; i < refCount; ++i)
        measures.push_back(extract_palette(request.references[i], request.paletteSize,
                                           request.seed + 1 + i)
                               .measure);

    const bool sweepToFixedTarget =
        marginals == 2 || request.schedule.mode == ScheduleMode::Uniform;

    // Shared plan for sweeps toward a fixed target measure (the single
    // reference, or the uniform barycenter); solved on first use.
    std::optional<SinkhornResult> basePlan;
    std::optional<DiscreteMeasure> baseTarget;
    int baseBarycenterIterations = 0;
    bool baseConverged = true;

    auto solveBase = [&]() {
        if (basePlan.has_value())
            return;
        if (marginals == 2) {
            baseTarget = measures[1];
        } else {
            BarycenterProblem problem;
            problem.measures = measures;
            problem.weights = schedule_weights(request.schedule, 1.0, marginals);
            problem.supportStrategy = SupportStrategy::UnionOfInputs;
            problem.solver = request.solver;
            problem.epsilonScale = request.epsilonScale;
            BarycenterResult bary = solve_barycenter(problem);
            baseBarycenterIterations = bary.iterations;
            baseConverged = bary.converged;
            baseTarget = std::move(bary.barycenter);
        }
        const CostMatrix cost = cost_matrix(measures[0], *baseTarget);
        basePlan = sinkhorn(measures[0].weights, baseTarget->weights, cost,
                            configFor(request, cost));
    };

    std::vector<AugmentedFrame> frames;
    frames.reserve(request.tSamples.size());

    for (double t : request.tSamples) {
        if (t == 0.0) {
            frames.push_back(sourceFrame(request, t));
            continue;
        }

        if (sweepToFixedTarget) {
            solveBase();
            const Eigen::MatrixXd mapped = interpolate_map(
                basePlan->plan, measures[0].support, baseTarget->support, t);
            AugmentedFrame frame = renderFrame(sourcePalette, mapped, t);
            frame.sinkhornIterations = basePlan->iterations;
            frame.barycenterIterations = baseBarycenterIterations;
            frame.converged = basePlan->converged && baseConverged;
            frames.push_back(std::move(frame));
            continue;
        }

        // Path schedules: re-solve the barycenter at lambda(t) and map the
        // source palette fully onto it.
        BarycenterProblem problem;
        problem.measures = measures;
        problem.weights = schedule_weights(request.schedule, t, marginals);
        problem.supportStrategy = SupportStrategy::UnionOfInputs;
        problem.solver = request.solver;
        problem.epsilonScale = request.epsilonScale;
        BarycenterResult bary = solve_barycenter(problem);

        const CostMatrix cost = cost_matrix(measures[0], bary.barycenter);
        const SinkhornResult solve = sinkhorn(measures[0].weights, bary.barycenter.weights,
                                              cost, configFor(request, cost));
        const Eigen::MatrixXd mapped =
            interpolate_map(solve.plan, measures[0].support, bary.barycenter.support, 1.0);

        AugmentedFrame frame = renderFrame(sourcePalette, mapped, t);
        frame.sinkhornIterations = solve.iterations;
        frame.barycenterIterations = bary.iterations;
        frame.converged = solve.converged && bary.converged;
        frames.push_back(std::move(frame));
    }
    return frames;
}

AugmentedFrame normalize(const NormalizationRequest& request)
{
    NormalizationRequest full = request;
    full.tSamples = {1.0};
    return std::move(augment(full).front());
}

} // namespace stainbary
