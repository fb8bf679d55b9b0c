#include "c2i/features.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>

namespace c2i {
namespace {

constexpr double kLogFloor = 1e-10;

void spectral_features(const Eigen::VectorXd& frame, int rate,
                       Eigen::Matrix<double, kFeatureDim, 1>& f) {
    Eigen::FFT<double> fft;
    std::vector<double> time(frame.data(), frame.data() + frame.size());
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, time);

    std::size_t half = time.size() / 2 + 1;
    double bin_hz = double(rate) / double(time.size());
    double total = 0.0, centroid_num = 0.0, log_sum = 0.0;
    double bands[4] = {0, 0, 0, 0};
    const double edges[3] = {300.0, 1000.0, 3000.0};
    for (std::size_t i = 0; i < half; ++i) {
        double p = std::norm(spec[i]);
        double freq = bin_hz * double(i);
        total += p;
        centroid_num += freq * p;
        log_sum += std::log(p + kLogFloor);
        int band = 3;
        if (freq < edges[0]) band = 0;
        else if (freq < edges[1]) band = 1;
        else if (freq < edges[2]) band = 2;
        bands[band] += p;
    }
    if (total <= 0.0) {
        f[2] = 0.0;
        f[3] = 0.0;
        f[4] = f[5] = f[6] = f[7] = 0.0;
        return;
    }
    f[2] = centroid_num / total;
    double gm = std::exp(log_sum / double(half));
    double am = total / double(half);
    f[3] = std::min(1.0, gm / (am + kLogFloor));
    for (int b = 0; b < 4; ++b) f[4 + b] = bands[b] / total;
}

}  // namespace

std::vector<FeatureWindow> extract_feature_windows(const AudioClip& clip, double window_s,
                                                   double hop_s) {
    if (window_s <= 0 || hop_s <= 0 || hop_s > window_s)
        throw PipelineError("features: require 0 < hop_s <= window_s");
    auto win_n = Eigen::Index(std::llround(window_s * clip.sample_rate_hz));
    auto hop_n = Eigen::Index(std::llround(hop_s * clip.sample_rate_hz));
    if (win_n < 2 || hop_n < 1) throw PipelineError("features: window too short for sample rate");
    if (clip.samples.size() < win_n)
        throw PipelineError("features: clip shorter than one window");

    std::vector<FeatureWindow> out;
    int idx = 0;
    for (Eigen::Index start = 0; start + win_n <= clip.samples.size(); start += hop_n, ++idx) {
        Eigen::VectorXd frame = clip.samples.segment(start, win_n);
        FeatureWindow w;
        w.index = idx;
        w.start_s = double(start) / clip.sample_rate_hz;
        w.end_s = w.start_s + window_s;
        double rms = std::sqrt(frame.squaredNorm() / double(win_n));
        w.features[0] = std::log(rms + kLogFloor);
        int crossings = 0;
        for (Eigen::Index i = 1; i < win_n; ++i)
            if (frame[i - 1] * frame[i] < 0.0) ++crossings;
        w.features[1] = double(crossings) / window_s;
        spectral_features(frame, clip.sample_rate_hz, w.features);
        out.push_back(std::move(w));
    }
    return out;
}

Eigen::MatrixXd feature_matrix(const std::vector<FeatureWindow>& windows) {
    Eigen::MatrixXd m(Eigen::Index(windows.size()), kFeatureDim);
    for (std::size_t i = 0; i < windows.size(); ++i)
        m.row(Eigen::Index(i)) = windows[i].features.transpose();
    return m;
}

}  // namespace c2i
