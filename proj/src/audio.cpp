#include "c2i/audio.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <random>

namespace c2i {
namespace {

std::uint32_t read_u32(std::string_view b, std::size_t off) {
    return std::uint32_t(std::uint8_t(b[off])) | std::uint32_t(std::uint8_t(b[off + 1])) << 8 |
           std::uint32_t(std::uint8_t(b[off + 2])) << 16 |
           std::uint32_t(std::uint8_t(b[off + 3])) << 24;
}

std::uint16_t read_u16(std::string_view b, std::size_t off) {
    return std::uint16_t(std::uint8_t(b[off])) | std::uint16_t(std::uint8_t(b[off + 1])) << 8;
}

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(char(v & 0xff));
    out.push_back(char((v >> 8) & 0xff));
    out.push_back(char((v >> 16) & 0xff));
    out.push_back(char((v >> 24) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(char(v & 0xff));
    out.push_back(char((v >> 8) & 0xff));
}

double decode_sample(std::string_view data, std::size_t frame, int ch, int channels,
                     int bits, std::uint16_t format) {
    std::size_t bytes = std::size_t(bits) / 8;
    std::size_t off = (frame * channels + ch) * bytes;
    switch (bits) {
        case 8: {
            int v = std::uint8_t(data[off]);
            return (v - 128) / 128.0;
        }
        case 16: {
            std::int16_t v = std::int16_t(read_u16(data, off));
            return v / 32768.0;
        }
        case 24: {
            std::int32_t v = std::int32_t(std::uint32_t(std::uint8_t(data[off])) |
                                          std::uint32_t(std::uint8_t(data[off + 1])) << 8 |
                                          std::uint32_t(std::uint8_t(data[off + 2])) << 16);
            if (v & 0x800000) v -= 0x1000000;
            return v / 8388608.0;
        }
        case 32: {
            if (format != 3) throw PipelineError("wav: 32-bit PCM integer unsupported, expected float");
            std::uint32_t raw = read_u32(data, off);
            float f;
            std::memcpy(&f, &raw, 4);
            return std::clamp(double(f), -1.0, 1.0);
        }
        default:
            throw PipelineError("wav: unsupported bit depth " + std::to_string(bits));
    }
}

std::int16_t to_pcm16(double x) {
    long v = std::lround(x * 32768.0);
    return std::int16_t(std::clamp(v, -32768l, 32767l));
}

}  // namespace

const char* to_string(ChannelLabel label) {
    switch (label) {
        case ChannelLabel::agent: return "agent";
        case ChannelLabel::customer: return "customer";
        case ChannelLabel::mono: return "mono";
    }
    return "?";
}

DecodedAudio decode_wav(std::string_view bytes) {
    if (bytes.empty()) throw PipelineError("wav: zero-length stream");
    if (bytes.size() < 44 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE")
        throw PipelineError("wav: not a RIFF/WAVE container");

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    std::string_view data;
    bool have_fmt = false, have_data = false;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        std::string_view id = bytes.substr(pos, 4);
        std::uint32_t size = read_u32(bytes, pos + 4);
        std::size_t body = pos + 8;
        if (body + size > bytes.size()) {
            if (id == "data") throw PipelineError("wav: truncated data chunk");
            break;
        }
        if (id == "fmt ") {
            if (size < 16) throw PipelineError("wav: malformed fmt chunk");
            format = read_u16(bytes, body);
            channels = read_u16(bytes, body + 2);
            rate = read_u32(bytes, body + 4);
            bits = read_u16(bytes, body + 14);
            have_fmt = true;
        } else if (id == "data") {
            data = bytes.substr(body, size);
            have_data = true;
        }
        pos = body + size + (size & 1);
    }
    if (!have_fmt || !have_data) throw PipelineError("wav: missing fmt or data chunk");
    if (format != 1 && format != 3)
        throw PipelineError("wav: unsupported codec tag " + std::to_string(format));
    if (channels < 1 || channels > 2)
        throw PipelineError("wav: unsupported channel count " + std::to_string(channels));
    if (rate == 0) throw PipelineError("wav: zero sample rate");
    if (bits != 8 && bits != 16 && bits != 24 && bits != 32)
        throw PipelineError("wav: unsupported bit depth " + std::to_string(bits));
    if (format == 3 && bits != 32) throw PipelineError("wav: float format must be 32-bit");

    std::size_t frame_bytes = std::size_t(channels) * bits / 8;
    if (data.size() % frame_bytes != 0) throw PipelineError("wav: truncated sample data");
    std::size_t frames = data.size() / frame_bytes;

    auto make_clip = [&](int ch, ChannelLabel label) {
        AudioClip clip;
        clip.sample_rate_hz = int(rate);
        clip.channel_label = label;
        clip.samples.resize(Eigen::Index(frames));
        for (std::size_t i = 0; i < frames; ++i)
            clip.samples[Eigen::Index(i)] = decode_sample(data, i, ch, channels, bits, format);
        return clip;
    };

    if (channels == 1) return make_clip(0, ChannelLabel::mono);
    StereoCall call;
    call.agent = make_clip(0, ChannelLabel::agent);
    call.customer = make_clip(1, ChannelLabel::customer);
    return call;
}

static std::string encode_pcm16_impl(const AudioClip* left, const AudioClip* right) {
    int channels = right ? 2 : 1;
    std::uint32_t rate = std::uint32_t(left->sample_rate_hz);
    std::size_t frames = std::size_t(left->samples.size());
    if (right && std::size_t(right->samples.size()) != frames)
        throw PipelineError("wav: stereo channels differ in length");
    std::uint32_t data_size = std::uint32_t(frames * channels * 2);

    std::string out;
    out.reserve(44 + data_size);
    out += "RIFF";
    put_u32(out, 36 + data_size);
    out += "WAVEfmt ";
    put_u32(out, 16);
    put_u16(out, 1);  // PCM
    put_u16(out, std::uint16_t(channels));
    put_u32(out, rate);
    put_u32(out, rate * channels * 2);
    put_u16(out, std::uint16_t(channels * 2));
    put_u16(out, 16);
    out += "data";
    put_u32(out, data_size);
    for (std::size_t i = 0; i < frames; ++i) {
        put_u16(out, std::uint16_t(to_pcm16(left->samples[Eigen::Index(i)])));
        if (right) put_u16(out, std::uint16_t(to_pcm16(right->samples[Eigen::Index(i)])));
    }
    return out;
}

std::string encode_wav_pcm16(const AudioClip& clip) { return encode_pcm16_impl(&clip, nullptr); }

std::string encode_wav_pcm16_stereo(const AudioClip& agent, const AudioClip& customer) {
    if (agent.sample_rate_hz != customer.sample_rate_hz)
        throw PipelineError("wav: stereo channels differ in sample rate");
    return encode_pcm16_impl(&agent, &customer);
}

AudioClip resample(const AudioClip& clip, int target_rate_hz) {
    if (target_rate_hz <= 0) throw PipelineError("resample: target rate must be positive");
    if (clip.sample_rate_hz == target_rate_hz) return clip;
    AudioClip out;
    out.sample_rate_hz = target_rate_hz;
    out.channel_label = clip.channel_label;
    Eigen::Index n_in = clip.samples.size();
    auto n_out = Eigen::Index(std::llround(double(n_in) * target_rate_hz / clip.sample_rate_hz));
    out.samples.resize(n_out);
    double step = double(clip.sample_rate_hz) / target_rate_hz;
    for (Eigen::Index i = 0; i < n_out; ++i) {
        double pos = i * step;
        auto i0 = Eigen::Index(pos);
        if (i0 >= n_in - 1) {
            out.samples[i] = n_in > 0 ? clip.samples[n_in - 1] : 0.0;
            continue;
        }
        double frac = pos - double(i0);
        out.samples[i] = clip.samples[i0] * (1.0 - frac) + clip.samples[i0 + 1] * frac;
    }
    return out;
}

AudioClip noise_gate(const AudioClip& clip, double threshold_dbfs, double frame_s) {
    if (threshold_dbfs > 0) throw PipelineError("noise_gate: threshold must be <= 0 dBFS");
    if (frame_s <= 0) throw PipelineError("noise_gate: frame must be positive");
    AudioClip out = clip;
    auto frame_n = Eigen::Index(std::llround(frame_s * clip.sample_rate_hz));
    if (frame_n < 1) frame_n = 1;
    double threshold_lin = std::pow(10.0, threshold_dbfs / 20.0);
    for (Eigen::Index start = 0; start < out.samples.size(); start += frame_n) {
        Eigen::Index len = std::min(frame_n, out.samples.size() - start);
        double rms = std::sqrt(out.samples.segment(start, len).squaredNorm() / double(len));
        if (rms < threshold_lin) out.samples.segment(start, len).setZero();
    }
    return out;
}

DenoiseResult apply_external_denoiser(const AudioClip& clip, const std::string& command_template,
                                      int timeout_s) {
    if (command_template.find("{in}") == std::string::npos ||
        command_template.find("{out}") == std::string::npos)
        throw PipelineError("denoiser: command template must contain {in} and {out}");

    namespace fs = std::filesystem;
    std::uint64_t tag = fnv1a64(command_template) ^ std::uint64_t(std::random_device{}());
    fs::path dir = fs::temp_directory_path();
    fs::path in_path = dir / ("c2i_dn_in_" + to_hex(tag) + ".wav");
    fs::path out_path = dir / ("c2i_dn_out_" + to_hex(tag) + ".wav");
    fs::path err_path = dir / ("c2i_dn_err_" + to_hex(tag) + ".txt");
    write_file(in_path.string(), encode_wav_pcm16(clip));

    std::string cmd = command_template;
    auto replace_all = [](std::string& s, std::string_view from, const std::string& to) {
        std::size_t pos = 0;
        while ((pos = s.find(from, pos)) != std::string::npos) {
            s.replace(pos, from.size(), to);
            pos += to.size();
        }
    };
    replace_all(cmd, "{in}", in_path.string());
    replace_all(cmd, "{out}", out_path.string());
    std::string full = "timeout " + std::to_string(timeout_s) + " " + cmd + " 2> " + err_path.string();
    int rc = std::system(full.c_str());

    auto cleanup = [&] {
        std::error_code ec;
        fs::remove(in_path, ec);
        fs::remove(out_path, ec);
        fs::remove(err_path, ec);
    };

    if (rc != 0) {
        std::string stderr_text;
        try { stderr_text = read_file(err_path.string()); } catch (...) {}
        cleanup();
        throw PipelineError("denoiser command failed (status " + std::to_string(rc) + "): " +
                            trim(stderr_text));
    }

    DenoiseResult result;
    try {
        std::string bytes = read_file(out_path.string());
        DecodedAudio decoded = decode_wav(bytes);
        if (auto* mono = std::get_if<AudioClip>(&decoded)) {
            result.clip = *mono;
        } else {
            // Stereo result from a mono input: keep channel 0.
            result.clip = std::get<StereoCall>(decoded).agent;
        }
    } catch (const std::exception& e) {
        cleanup();
        throw PipelineError(std::string("denoiser output unreadable: ") + e.what());
    }
    cleanup();
    result.clip.channel_label = clip.channel_label;
    double in_dur = clip.duration_s();
    double out_dur = result.clip.duration_s();
    if (in_dur > 0 && std::abs(out_dur - in_dur) > 0.01 * in_dur)
        result.warning = "denoiser changed duration from " + std::to_string(in_dur) + "s to " +
                         std::to_string(out_dur) + "s";
    return result;
}

}  // namespace c2i
