#pragma once

#include <Eigen/Dense>

#include "stainbary/image.hpp"

namespace stainbary {

struct SsimConfig {
    int windowSize = 7;            // odd, >= 3
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamicRange = 255.0;   // 8-bit luminance
    bool gaussianWindow = true;    // false = uniform window
    double gaussianSigma = 1.5;

    void validate() const;
};

/// Lab luminance L scaled from [0, 100] to [0, 255], one entry per pixel.
Eigen::MatrixXd luminance_plane(const Image& image);

/// Mean local structural similarity of two equally sized planes over all
/// fully covered windows. Exactly 1.0 for identical planes, symmetric in its
/// arguments, bounded by [-1, 1].
double ssim_plane(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                  const SsimConfig& config = {});

/// SSIM of two images on their luminance channel.
double ssim(const Image& a, const Image& b, const SsimConfig& config = {});

} // namespace stainbary
