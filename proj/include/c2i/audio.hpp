#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <variant>

#include "c2i/common.hpp"

namespace c2i {

enum class ChannelLabel { agent, customer, mono };

const char* to_string(ChannelLabel label);

// Decoded sample stream. Samples stay in [-1, 1] after decode/normalize.
struct AudioClip {
    Eigen::VectorXd samples;
    int sample_rate_hz = 0;
    ChannelLabel channel_label = ChannelLabel::mono;

    double duration_s() const {
        return sample_rate_hz > 0 ? double(samples.size()) / sample_rate_hz : 0.0;
    }
};

struct StereoCall {
    std::string call_id;
    AudioClip agent;
    AudioClip customer;
};

using DecodedAudio = std::variant<StereoCall, AudioClip>;

// RIFF/WAVE decode: PCM 8/16/24-bit and 32-bit float, 1 or 2 channels.
// Stereo maps channel 0 -> agent, channel 1 -> customer.
DecodedAudio decode_wav(std::string_view bytes);

// Canonical output format: PCM16.
std::string encode_wav_pcm16(const AudioClip& clip);
std::string encode_wav_pcm16_stereo(const AudioClip& agent, const AudioClip& customer);

// Linear-interpolation resampler; identity at equal rates.
AudioClip resample(const AudioClip& clip, int target_rate_hz);

// Frames with RMS below threshold_dbfs are zeroed. Length unchanged.
AudioClip noise_gate(const AudioClip& clip, double threshold_dbfs, double frame_s);

struct DenoiseResult {
    AudioClip clip;
    std::optional<std::string> warning;
};

// Subprocess denoiser contract: command template with {in}/{out} placeholders,
// exit code 0 = success. Output duration drifting > 1% from input produces a warning.
DenoiseResult apply_external_denoiser(const AudioClip& clip, const std::string& command_template,
                                      int timeout_s = 120);

}  // namespace c2i
