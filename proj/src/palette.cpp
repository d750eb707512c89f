#include "stainbary/palette.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <unordered_map>

#include "stainbary/colorspace.hpp"
#include "stainbary/errors.hpp"

namespace stainbary {

namespace {

// Uniform double in [0, 1) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
double nextUnit(std::mt19937_64& rng)
{
    return double(rng() >> 11) * 0x1.0p-53;
}

// Weighted draw by cumulative scan. `total` must be the sum of weights.
Eigen::Index weightedDraw(const Eigen::VectorXd& weights, double total, std::mt19937_64& rng)
{
    const double r = nextUnit(rng) * total;
    double acc = 0.0;
    Eigen::Index last = 0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        if (weights(i) <= 0.0)
            continue;
        acc += weights(i);
        last = i;
        if (r < acc)
            return i;
    }
    return last;
}

Eigen::Index nearestCentroid(const Eigen::MatrixXd& centroids, int used,
                             const Eigen::RowVectorXd& point)
{
    Eigen::Index best = 0;
    double bestDist = std::numeric_limits<double>::infinity();
    for (int c = 0; c < used; ++c) {
        const double dist = (centroids.row(c) - point).squaredNorm();
        if (dist < bestDist) {
            bestDist = dist;
            best = c;
        }
    }
    return best;
}

} // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, const Eigen::VectorXd& pointWeights,
                    int k, std::uint64_t seed, int maxIterations, double moveTolerance)
{
    const Eigen::Index count = points.rows();
    if (count == 0)
        throw InvalidArgument("kmeans: no points");
    if (pointWeights.size() != count)
        throw InvalidArgument("kmeans: weight count does not match point count");
    if (k < 1)
        throw InvalidArgument("kmeans: k must be >= 1, got " + std::to_string(k));
    if ((pointWeights.array() < 0.0).any())
        throw InvalidArgument("kmeans: negative point weights");

    const double totalWeight = pointWeights.sum();
    if (totalWeight <= 0.0)
        throw InvalidArgument("kmeans: total point weight is zero");

    std::mt19937_64 rng(seed);

    // k-means++ seeding; stops early once every point coincides with a chosen
    // centroid, so a single-color input yields a single centroid.
    Eigen::MatrixXd centroids(k, points.cols());
    int used = 0;
    Eigen::VectorXd nearestDistSq = Eigen::VectorXd::Constant(count, std::numeric_limits<double>::infinity());
    centroids.row(used++) = points.row(weightedDraw(pointWeights, totalWeight, rng));
    while (used < k) {
        Eigen::VectorXd draw(count);
        double drawTotal = 0.0;
        for (Eigen::Index i = 0; i < count; ++i) {
            const double d = (points.row(i) - centroids.row(used - 1)).squaredNorm();
            if (d < nearestDistSq(i))
                nearestDistSq(i) = d;
            draw(i) = pointWeights(i) * nearestDistSq(i);
            drawTotal += draw(i);
        }
        if (drawTotal <= 0.0)
            break;
        centroids.row(used++) = points.row(weightedDraw(draw, drawTotal, rng));
    }

    std::vector<int> assignments(std::size_t(count), 0);
    KMeansResult result;

    for (int iter = 1; iter <= maxIterations; ++iter) {
        double objective = 0.0;
        for (Eigen::Index i = 0; i < count; ++i) {
            const Eigen::Index c = nearestCentroid(centroids, used, points.row(i));
            assignments[std::size_t(i)] = int(c);
            objective += pointWeights(i) * (points.row(i) - centroids.row(c)).squaredNorm();
        }
        result.objective.push_back(objective);
        result.iterations = iter;

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(used, points.cols());
        Eigen::VectorXd mass = Eigen::VectorXd::Zero(used);
        for (Eigen::Index i = 0; i < count; ++i) {
            sums.row(assignments[std::size_t(i)]) += pointWeights(i) * points.row(i);
            mass(assignments[std::size_t(i)]) += pointWeights(i);
        }

        double movement = 0.0;
        for (int c = 0; c < used; ++c) {
            if (mass(c) > 0.0) {
                const Eigen::RowVectorXd updated = sums.row(c) / mass(c);
                movement = std::max(movement, (updated - centroids.row(c)).norm());
                centroids.row(c) = updated;
            }
        }
        if (movement < moveTolerance)
            break;
    }

    // Sync assignments with the final centroids, then drop empty clusters.
    std::vector<Eigen::Index> clusterCount(std::size_t(used), 0);
    for (Eigen::Index i = 0; i < count; ++i) {
        const Eigen::Index c = nearestCentroid(centroids, used, points.row(i));
        assignments[std::size_t(i)] = int(c);
        ++clusterCount[std::size_t(c)];
    }

    std::vector<int> remap(std::size_t(used), -1);
    int kept = 0;
    for (int c = 0; c < used; ++c)
        if (clusterCount[std::size_t(c)] > 0)
            remap[std::size_t(c)] = kept++;

    result.centroids.resize(kept, points.cols());
    for (int c = 0; c < used; ++c)
        if (remap[std::size_t(c)] >= 0)
            result.centroids.row(remap[std::size_t(c)]) = centroids.row(c);
    for (Eigen::Index i = 0; i < count; ++i)
        assignments[std::size_t(i)] = remap[std::size_t(assignments[std::size_t(i)])];

    result.assignments = std::move(assignments);
    return result;
}

ColorPalette extract_palette(const Image& image, int k, std::uint64_t seed)
{
    if (image.empty())
        throw InvalidArgument("extract_palette: empty image");
    const std::size_t pixelCount = image.pixelCount();
    if (k < 1 || std::size_t(k) > pixelCount)
        throw InvalidArgument("extract_palette: k = " + std::to_string(k) +
                              " outside [1, pixel count]");

    // Identical RGB values share one Lab point; k-means runs weighted on the
    // distinct colors, which is equivalent and much faster on photographs.
    std::unordered_map<std::uint32_t, int> colorIndex;
    std::vector<std::uint32_t> colorKeys;
    std::vector<double> colorCounts;
    std::vector<int> pixelColor(pixelCount);
    colorIndex.reserve(4096);

    for (std::size_t p = 0; p < pixelCount; ++p) {
        const std::uint32_t key = std::uint32_t(image.pixels[3 * p]) << 16 |
                                  std::uint32_t(image.pixels[3 * p + 1]) << 8 |
                                  std::uint32_t(image.pixels[3 * p + 2]);
        auto [it, inserted] = colorIndex.try_emplace(key, int(colorKeys.size()));
        if (inserted) {
            colorKeys.push_back(key);
            colorCounts.push_back(0.0);
        }
        pixelColor[p] = it->second;
        colorCounts[std::size_t(it->second)] += 1.0;
    }

    const Eigen::Index distinct = Eigen::Index(colorKeys.size());
    Eigen::MatrixXd labColors(distinct, 3);
    for (Eigen::Index i = 0; i < distinct; ++i) {
        const std::uint32_t key = colorKeys[std::size_t(i)];
        const LabPixel lab = rgb_to_lab({std::uint8_t(key >> 16), std::uint8_t(key >> 8),
                                         std::uint8_t(key)});
        labColors(i, 0) = lab.L;
        labColors(i, 1) = lab.a;
        labColors(i, 2) = lab.b;
    }
    Eigen::VectorXd counts = Eigen::Map<Eigen::VectorXd>(colorCounts.data(), distinct);

    const KMeansResult clusters =
        kmeans(labColors, counts, std::min<int>(k, int(distinct)), seed);
    const Eigen::Index supportSize = clusters.centroids.rows();

    ColorPalette palette;
    palette.width = image.width;
    palette.height = image.height;
    palette.measure.support = clusters.centroids;
    palette.assignments.resize(pixelCount);
    palette.residuals.resize(Eigen::Index(pixelCount), 3);

    std::vector<double> clusterPixels(std::size_t(supportSize), 0.0);
    for (std::size_t p = 0; p < pixelCount; ++p) {
        const int color = pixelColor[p];
        const int cluster = clusters.assignments[std::size_t(color)];
        palette.assignments[p] = cluster;
        palette.residuals.row(Eigen::Index(p)) =
            labColors.row(color) - clusters.centroids.row(cluster);
        clusterPixels[std::size_t(cluster)] += 1.0;
    }

    // Weights are exact pixel fractions; nudge the largest one so the
    // floating-point total is exactly 1.
    palette.measure.weights.resize(supportSize);
    Eigen::Index largest = 0;
    for (Eigen::Index c = 0; c < supportSize; ++c) {
        palette.measure.weights(c) = clusterPixels[std::size_t(c)] / double(pixelCount);
        if (clusterPixels[std::size_t(c)] > clusterPixels[std::size_t(largest)])
            largest = c;
    }
    double sum = 0.0;
    for (Eigen::Index c = 0; c < supportSize; ++c)
        sum += palette.measure.weights(c);
    palette.measure.weights(largest) += 1.0 - sum;

    return palette;
}

ReconstructedImage reconstruct(const ColorPalette& palette, const Eigen::MatrixXd& newSupport)
{
    if (newSupport.rows() != palette.measure.support.rows() || newSupport.cols() != 3)
        throw InvalidArgument("reconstruct: replacement support must be " +
                              std::to_string(palette.measure.support.rows()) +
                              "x3, got " + std::to_string(newSupport.rows()) + "x" +
                              std::to_string(newSupport.cols()));

    ReconstructedImage out;
    out.image.width = palette.width;
    out.image.height = palette.height;
    out.image.pixels.resize(out.image.pixelCount() * 3);

    const std::size_t pixelCount = out.image.pixelCount();
    for (std::size_t p = 0; p < pixelCount; ++p) {
        const Eigen::Index cluster = palette.assignments[p];
        LabPixel lab;
        lab.L = newSupport(cluster, 0) + palette.residuals(Eigen::Index(p), 0);
        lab.a = newSupport(cluster, 1) + palette.residuals(Eigen::Index(p), 1);
        lab.b = newSupport(cluster, 2) + palette.residuals(Eigen::Index(p), 2);
        bool clipped = false;
        const RgbPixel rgb = lab_to_rgb(lab, clipped);
        if (clipped)
            ++out.gamutClipped;
        out.image.pixels[3 * p] = rgb.r;
        out.image.pixels[3 * p + 1] = rgb.g;
        out.image.pixels[3 * p + 2] = rgb.b;
    }
    return out;
}

} // namespace stainbary
