#pragma once

#include <Eigen/Core>
#include <vector>

#include "c2i/audio.hpp"

namespace c2i {

inline constexpr int kFeatureDim = 8;

// Per-window acoustic features:
//   [0] log-RMS energy
//   [1] zero-crossing rate per second
//   [2] spectral centroid (Hz)
//   [3] spectral flatness in [0, 1]
//   [4..7] band-energy ratios 0-300 Hz, 300-1k, 1k-3k, 3k-Nyquist
struct FeatureWindow {
    int index = 0;
    double start_s = 0.0;
    double end_s = 0.0;
    Eigen::Matrix<double, kFeatureDim, 1> features;
};

// Fixed windows at stride hop_s; a trailing window shorter than window_s is dropped.
// Degenerate (zero-energy) windows get flatness 0 and all-zero band ratios.
std::vector<FeatureWindow> extract_feature_windows(const AudioClip& clip, double window_s,
                                                   double hop_s);

// Rows = windows, cols = features. Convenience for feeding kmeans.
Eigen::MatrixXd feature_matrix(const std::vector<FeatureWindow>& windows);

}  // namespace c2i
