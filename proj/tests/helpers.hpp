#pragma once

// Shared fixture helpers for the unit and acceptance suites.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include "c2i/audio.hpp"
#include "c2i/common.hpp"

namespace testutil {

inline c2i::AudioClip make_sine(double freq_hz, double duration_s, int rate_hz,
                                double amplitude = 1.0,
                                c2i::ChannelLabel label = c2i::ChannelLabel::mono) {
    c2i::AudioClip clip;
    clip.sample_rate_hz = rate_hz;
    clip.channel_label = label;
    auto n = static_cast<Eigen::Index>(std::llround(duration_s * rate_hz));
    clip.samples.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
        clip.samples[i] = amplitude * std::sin(2.0 * M_PI * freq_hz * double(i) / rate_hz);
    return clip;
}

inline c2i::AudioClip make_noise(double duration_s, int rate_hz, double amplitude,
                                 std::uint64_t seed) {
    c2i::AudioClip clip;
    clip.sample_rate_hz = rate_hz;
    clip.channel_label = c2i::ChannelLabel::mono;
    auto n = static_cast<Eigen::Index>(std::llround(duration_s * rate_hz));
    clip.samples.resize(n);
    std::uint64_t state = seed;
    for (Eigen::Index i = 0; i < n; ++i)
        clip.samples[i] = amplitude * (2.0 * c2i::splitmix_unit(state) - 1.0);
    return clip;
}

// Synthetic stereo call: dual-tone IVR head on the agent channel, then
// amplitude-modulated noise "speech" on both channels. The seed varies the
// noise so every call has a distinct clip digest.
inline std::string make_stereo_call_wav(std::uint64_t seed, double head_s = 8.0,
                                        double total_s = 24.0, int rate = 16000) {
    c2i::AudioClip agent, customer;
    agent.sample_rate_hz = customer.sample_rate_hz = rate;
    agent.channel_label = c2i::ChannelLabel::agent;
    customer.channel_label = c2i::ChannelLabel::customer;
    auto n = Eigen::Index(total_s * rate);
    agent.samples.resize(n);
    customer.samples.resize(n);
    std::uint64_t state = seed;
    for (Eigen::Index i = 0; i < n; ++i) {
        double t = double(i) / rate;
        if (t < head_s) {
            agent.samples[i] = 0.4 * std::sin(2.0 * M_PI * 440.0 * t) +
                               0.3 * std::sin(2.0 * M_PI * 880.0 * t);
            customer.samples[i] = 0.0;
        } else {
            double env = 0.5 + 0.5 * std::sin(2.0 * M_PI * 3.0 * t);
            agent.samples[i] = 0.5 * env * (2.0 * c2i::splitmix_unit(state) - 1.0);
            customer.samples[i] = 0.4 * (1.0 - env) * (2.0 * c2i::splitmix_unit(state) - 1.0);
        }
    }
    return c2i::encode_wav_pcm16_stereo(agent, customer);
}

inline void write_call_fixture(const std::string& dir, int calls) {
    std::filesystem::create_directories(dir);
    for (int i = 0; i < calls; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "call-%03d.wav", i);
        c2i::write_file((std::filesystem::path(dir) / name).string(),
                        make_stereo_call_wav(1000 + std::uint64_t(i) * 77));
    }
}

// Fresh scratch directory under the system temp root, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("c2i_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::string str() const { return path_.string(); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

}  // namespace testutil
