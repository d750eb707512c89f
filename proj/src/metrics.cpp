#include "stainbary/metrics.hpp"

#include <cmath>
#include <string>

#include "stainbary/colorspace.hpp"
#include "stainbary/errors.hpp"

namespace stainbary {

namespace {

Eigen::VectorXd windowKernel(const SsimConfig& config)
{
    const int size = config.windowSize;
    Eigen::VectorXd kernel(size);
    if (config.gaussianWindow) {
        const double center = (size - 1) / 2.0;
        for (int i = 0; i < size; ++i) {
            const double d = i - center;
            kernel(i) = std::exp(-d * d / (2.0 * config.gaussianSigma * config.gaussianSigma));
        }
    } else {
        kernel.setOnes();
    }
    return kernel / kernel.sum();
}

// Separable valid-region convolution with the same 1D kernel per axis.
Eigen::MatrixXd convolveValid(const Eigen::MatrixXd& plane, const Eigen::VectorXd& kernel)
{
    const Eigen::Index w = kernel.size();
    const Eigen::Index rows = plane.rows();
    const Eigen::Index cols = plane.cols() - w + 1;

    Eigen::MatrixXd horizontal(rows, cols);
    for (Eigen::Index x = 0; x < cols; ++x)
        horizontal.col(x) = plane.middleCols(x, w) * kernel;

    Eigen::MatrixXd out(rows - w + 1, cols);
    for (Eigen::Index y = 0; y < rows - w + 1; ++y)
        out.row(y) = kernel.transpose() * horizontal.middleRows(y, w);
    return out;
}

} // namespace

void SsimConfig::validate() const
{
    if (windowSize < 3 || windowSize % 2 == 0)
        throw InvalidArgument("SsimConfig: windowSize must be odd and >= 3, got " +
                              std::to_string(windowSize));
    if (!(k1 > 0.0) || !(k2 > 0.0))
        throw InvalidArgument("SsimConfig: k1 and k2 must be > 0");
    if (!(dynamicRange > 0.0))
        throw InvalidArgument("SsimConfig: dynamicRange must be > 0");
    if (gaussianWindow && !(gaussianSigma > 0.0))
        throw InvalidArgument("SsimConfig: gaussianSigma must be > 0");
}

Eigen::MatrixXd luminance_plane(const Image& image)
{
    Eigen::MatrixXd plane(image.height, image.width);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x)
            plane(y, x) = rgb_to_lab(image.at(x, y)).L * 2.55;
    return plane;
}

double ssim_plane(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                  const SsimConfig& config)
{
    config.validate();
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidArgument("ssim: planes are " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                              "x" + std::to_string(b.cols()));
    if (a.rows() < config.windowSize || a.cols() < config.windowSize)
        throw InvalidArgument("ssim: image smaller than the " +
                              std::to_string(config.windowSize) + "-pixel window");

    const double c1 = (config.k1 * config.dynamicRange) * (config.k1 * config.dynamicRange);
    const double c2 = (config.k2 * config.dynamicRange) * (config.k2 * config.dynamicRange);
    const Eigen::VectorXd kernel = windowKernel(config);

    const Eigen::MatrixXd muA = convolveValid(a, kernel);
    const Eigen::MatrixXd muB = convolveValid(b, kernel);
    const Eigen::MatrixXd rawAA = convolveValid(a.cwiseProduct(a), kernel);
    const Eigen::MatrixXd rawBB = convolveValid(b.cwiseProduct(b), kernel);
    const Eigen::MatrixXd rawAB = convolveValid(a.cwiseProduct(b), kernel);

    double sum = 0.0;
    for (Eigen::Index y = 0; y < muA.rows(); ++y) {
        for (Eigen::Index x = 0; x < muA.cols(); ++x) {
            const double ma = muA(y, x);
            const double mb = muB(y, x);
            const double varA = rawAA(y, x) - ma * ma;
            const double varB = rawBB(y, x) - mb * mb;
            const double cov = rawAB(y, x) - ma * mb;
            const double numerator = (2.0 * (ma * mb) + c1) * (2.0 * cov + c2);
            const double denominator = ((ma * ma) + (mb * mb) + c1) * ((varA + varB) + c2);
            sum += numerator / denominator;
        }
    }
    return sum / double(muA.size());
}

double ssim(const Image& a, const Image& b, const SsimConfig& config)
{
    if (a.width != b.width || a.height != b.height)
        throw InvalidArgument("ssim: image dimensions differ, " + std::to_string(a.width) +
                              "x" + std::to_string(a.height) + " vs " + std::to_string(b.width) +
                              "x" + std::to_string(b.height));
    return ssim_plane(luminance_plane(a), luminance_plane(b), config);
}

} // namespace stainbary
