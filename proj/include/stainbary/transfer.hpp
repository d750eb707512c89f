#pragma once

#include <cstdint>
#include <vector>

#include "stainbary/barycenter.hpp"
#include "stainbary/image.hpp"
#include "stainbary/palette.hpp"
#include "stainbary/sinkhorn.hpp"

namespace stainbary {

/// Default relative regularization for the image pipeline. Smaller than the
/// generic solver default: palette self-maps must stay within a couple of
/// 8-bit steps, which needs a tighter kernel.
inline constexpr double kTransferEpsilonScale = 0.0005;

/// End-to-end request: move the source image's color distribution toward the
/// references. references holds 1 to 3 images; the last one is the final
/// target, earlier ones are intermediates.
struct NormalizationRequest {
    Image source;
    std::vector<Image> references;
    WeightSchedule schedule;                       // Uniform = blend all marginals
    std::vector<double> tSamples = {1.0};          // sorted, within [0, 1]
    int paletteSize = kDefaultPaletteSize;
    double epsilonScale = kTransferEpsilonScale;   // epsilon = scale * max cost, per subproblem
    SolverConfig solver;                           // epsilon is filled in per subproblem
    std::uint64_t seed = 0;

    void validate() const;
};

struct AugmentedFrame {
    double t = 0.0;
    Image image;
    std::size_t gamutClipped = 0;
    int sinkhornIterations = 0;
    int barycenterIterations = 0;
    bool converged = true;
};

/// One output image per entry of tSamples. t = 0 reproduces the source
/// bit-identically; t = 1 equals normalize(). With one reference the sweep is
/// displacement interpolation toward it; with several references and a
/// Uniform schedule it is displacement toward the fixed uniform barycenter;
/// path schedules re-solve the barycenter at lambda(t) and map fully onto it.
std::vector<AugmentedFrame> augment(const NormalizationRequest& request);

/// The t = 1 frame: full transfer onto the reference (or barycenter) palette.
AugmentedFrame normalize(const NormalizationRequest& request);

/// Plan-weighted average of the target support, one point per plan row:
/// T(x_i) = sum_j plan_ij y_j / a_i. Every output lies in the convex hull of
/// targetSupport. Throws on rows with zero marginal.
Eigen::MatrixXd barycentric_map(const TransportPlan& plan,
                                const Eigen::MatrixXd& targetSupport);

} // namespace stainbary
