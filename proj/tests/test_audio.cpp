#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "c2i/audio.hpp"
#include "helpers.hpp"

using namespace c2i;
using testutil::make_sine;

namespace {

void put_u32(std::string& s, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) s.push_back(char((v >> (8 * i)) & 0xff));
}
void put_u16(std::string& s, std::uint16_t v) {
    for (int i = 0; i < 2; ++i) s.push_back(char((v >> (8 * i)) & 0xff));
}

// Hand-rolled RIFF writer, independent of the library's encoder, so the decode
// tests do not trust the code under test.
std::string raw_wav(int channels, int rate, int bits, bool float_fmt, const std::string& data) {
    std::string out = "RIFF";
    std::string fmt;
    put_u16(fmt, float_fmt ? 3 : 1);
    put_u16(fmt, std::uint16_t(channels));
    put_u32(fmt, std::uint32_t(rate));
    int block = channels * bits / 8;
    put_u32(fmt, std::uint32_t(rate * block));
    put_u16(fmt, std::uint16_t(block));
    put_u16(fmt, std::uint16_t(bits));
    put_u32(out, std::uint32_t(4 + 8 + fmt.size() + 8 + data.size()));
    out += "WAVE";
    out += "fmt ";
    put_u32(out, std::uint32_t(fmt.size()));
    out += fmt;
    out += "data";
    put_u32(out, std::uint32_t(data.size()));
    out += data;
    return out;
}

}  // namespace

TEST_CASE("decode: 1s stereo PCM16 silence at 16 kHz") {
    std::string data(16000 * 2 * 2, '\0');
    auto decoded = decode_wav(raw_wav(2, 16000, 16, false, data));
    auto* call = std::get_if<StereoCall>(&decoded);
    REQUIRE(call != nullptr);
    CHECK(call->agent.samples.size() == 16000);
    CHECK(call->customer.samples.size() == 16000);
    CHECK(call->agent.sample_rate_hz == 16000);
    CHECK(call->agent.channel_label == ChannelLabel::agent);
    CHECK(call->customer.channel_label == ChannelLabel::customer);
    CHECK(call->agent.samples.cwiseAbs().maxCoeff() == 0.0);
    CHECK(call->customer.samples.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("decode: PCM16 scaling is v/32768") {
    std::string data;
    put_u16(data, 32767);                         // max positive
    put_u16(data, std::uint16_t(std::int16_t(-32768)));  // max negative
    auto decoded = decode_wav(raw_wav(1, 16000, 16, false, data));
    auto& clip = std::get<AudioClip>(decoded);
    CHECK(clip.samples[0] == doctest::Approx(32767.0 / 32768.0).epsilon(1e-12));
    CHECK(clip.samples[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(clip.channel_label == ChannelLabel::mono);
}

TEST_CASE("decode: 8 kHz mono 2.5 s -> 20000 samples") {
    std::string data(20000 * 2, '\0');
    auto decoded = decode_wav(raw_wav(1, 8000, 16, false, data));
    auto& clip = std::get<AudioClip>(decoded);
    CHECK(clip.samples.size() == 20000);
    CHECK(clip.sample_rate_hz == 8000);
    CHECK(clip.duration_s() == doctest::Approx(2.5));
}

TEST_CASE("decode: 8-bit, 24-bit and float32 codecs") {
    SUBCASE("8-bit unsigned") {
        std::string data;
        data.push_back(char(0xff));  // max
        data.push_back(char(0x80));  // midpoint -> 0
        data.push_back(char(0x00));  // min
        auto clip = std::get<AudioClip>(decode_wav(raw_wav(1, 8000, 8, false, data)));
        CHECK(clip.samples[1] == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(clip.samples[0] > 0.98);
        CHECK(clip.samples[2] == doctest::Approx(-1.0));
    }
    SUBCASE("24-bit") {
        std::string data;
        // 0x7fffff = max positive; 0x800000 = max negative
        data += std::string("\xff\xff\x7f", 3);
        data += std::string("\x00\x00\x80", 3);
        auto clip = std::get<AudioClip>(decode_wav(raw_wav(1, 8000, 24, false, data)));
        CHECK(clip.samples[0] == doctest::Approx(double(0x7fffff) / double(0x800000)));
        CHECK(clip.samples[1] == doctest::Approx(-1.0));
    }
    SUBCASE("float32") {
        std::string data;
        float vals[2] = {0.25f, -0.5f};
        data.append(reinterpret_cast<const char*>(vals), sizeof vals);
        auto clip = std::get<AudioClip>(decode_wav(raw_wav(1, 8000, 32, true, data)));
        CHECK(clip.samples[0] == doctest::Approx(0.25));
        CHECK(clip.samples[1] == doctest::Approx(-0.5));
    }
}

TEST_CASE("decode: error cases") {
    CHECK_THROWS_AS(decode_wav(""), PipelineError);
    CHECK_THROWS_AS(decode_wav("RIFFxxxxWAVE"), PipelineError);
    std::string wav = raw_wav(1, 8000, 16, false, std::string(100, '\0'));
    CHECK_THROWS_AS(decode_wav(std::string_view(wav).substr(0, 30)), PipelineError);
}

TEST_CASE("round-trip: decode(encode(decode(x))) is sample-identical for PCM16") {
    auto clip = make_sine(440.0, 0.25, 16000, 0.8);
    auto first = std::get<AudioClip>(decode_wav(encode_wav_pcm16(clip)));
    auto second = std::get<AudioClip>(decode_wav(encode_wav_pcm16(first)));
    REQUIRE(first.samples.size() == second.samples.size());
    CHECK((first.samples - second.samples).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("round-trip: stereo encode keeps channels separate") {
    auto a = make_sine(200.0, 0.1, 16000, 0.5, ChannelLabel::agent);
    auto c = make_sine(700.0, 0.1, 16000, 0.5, ChannelLabel::customer);
    auto decoded = decode_wav(encode_wav_pcm16_stereo(a, c));
    auto& call = std::get<StereoCall>(decoded);
    // channel identity: each decoded channel correlates with its source
    double corr_aa = call.agent.samples.dot(a.samples);
    double corr_ac = call.agent.samples.dot(c.samples);
    CHECK(corr_aa > 10.0 * std::abs(corr_ac));
}

TEST_CASE("resample: identity at equal rates") {
    auto clip = make_sine(440.0, 0.1, 16000);
    auto out = resample(clip, 16000);
    CHECK(out.samples.size() == clip.samples.size());
    CHECK((out.samples - clip.samples).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("resample: 8 kHz 8000 samples -> 16 kHz 16000 samples") {
    AudioClip clip;
    clip.sample_rate_hz = 8000;
    clip.samples = Eigen::VectorXd::Zero(8000);
    auto out = resample(clip, 16000);
    CHECK(out.samples.size() == 16000);
    CHECK(out.sample_rate_hz == 16000);
}

TEST_CASE("resample: 440 Hz sine against the analytic oracle") {
    auto clip = make_sine(440.0, 1.0, 8000);
    auto out = resample(clip, 16000);
    double err2 = 0.0;
    for (Eigen::Index i = 0; i < out.samples.size(); ++i) {
        double expected = std::sin(2.0 * M_PI * 440.0 * double(i) / 16000.0);
        err2 += (out.samples[i] - expected) * (out.samples[i] - expected);
    }
    double rms = std::sqrt(err2 / double(out.samples.size()));
    CHECK(rms < 0.01);
}

TEST_CASE("noise_gate: silence unchanged") {
    AudioClip clip;
    clip.sample_rate_hz = 16000;
    clip.samples = Eigen::VectorXd::Zero(16000);
    auto out = noise_gate(clip, -40.0, 0.05);
    CHECK(out.samples.cwiseAbs().maxCoeff() == 0.0);
    CHECK(out.samples.size() == 16000);
}

TEST_CASE("noise_gate: full-scale sine passes (RMS -3 dBFS)") {
    auto clip = make_sine(440.0, 0.5, 16000, 1.0);
    auto out = noise_gate(clip, -40.0, 0.05);
    CHECK((out.samples - clip.samples).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("noise_gate: frame-RMS oracle on alternating loud/quiet audio") {
    int rate = 16000;
    double frame_s = 0.05;
    // 0.5 s loud sine, 0.5 s noise at -60 dBFS, repeated
    AudioClip clip;
    clip.sample_rate_hz = rate;
    clip.samples.resize(rate * 2);
    std::uint64_t state = 7;
    for (int i = 0; i < rate * 2; ++i) {
        bool loud = (i / (rate / 2)) % 2 == 0;
        if (loud)
            clip.samples[i] = 0.8 * std::sin(2.0 * M_PI * 300.0 * i / rate);
        else
            clip.samples[i] = 0.001 * (2.0 * splitmix_unit(state) - 1.0);
    }
    auto out = noise_gate(clip, -40.0, frame_s);
    // oracle: recompute per-frame RMS on the input and check the gate decision
    int frame_n = int(frame_s * rate);
    double thresh = std::pow(10.0, -40.0 / 20.0);
    for (int f = 0; f * frame_n < int(clip.samples.size()); ++f) {
        int start = f * frame_n;
        int len = std::min<int>(frame_n, int(clip.samples.size()) - start);
        double rms = std::sqrt(clip.samples.segment(start, len).squaredNorm() / len);
        if (rms < thresh)
            CHECK(out.samples.segment(start, len).cwiseAbs().maxCoeff() == 0.0);
        else
            CHECK((out.samples.segment(start, len) - clip.samples.segment(start, len))
                      .cwiseAbs()
                      .maxCoeff() == 0.0);
    }
}

TEST_CASE("noise_gate: idempotent") {
    auto clip = testutil::make_noise(0.3, 16000, 0.002, 3);
    auto once = noise_gate(clip, -40.0, 0.05);
    auto twice = noise_gate(once, -40.0, 0.05);
    CHECK((once.samples - twice.samples).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("external denoiser: copy-through command is the identity") {
    auto clip = make_sine(440.0, 0.1, 16000, 0.5);
    auto result = apply_external_denoiser(clip, "cp {in} {out}");
    REQUIRE(result.clip.samples.size() == clip.samples.size());
    // identity up to one PCM16 quantization
    CHECK((result.clip.samples - clip.samples).cwiseAbs().maxCoeff() < 1.0 / 32768.0);
    CHECK(!result.warning.has_value());
}

TEST_CASE("external denoiser: nonzero exit carries stderr") {
    auto clip = make_sine(440.0, 0.05, 16000, 0.5);
    try {
        apply_external_denoiser(clip, "sh -c 'echo boom >&2; exit 1' ignored {in} {out}");
        FAIL("expected a PipelineError");
    } catch (const PipelineError& e) {
        CHECK(std::string(e.what()).find("boom") != std::string::npos);
    }
}

TEST_CASE("external denoiser: half-length output triggers a duration warning") {
    testutil::TempDir dir("denoise");
    std::string script = dir.file("halve.py");
    write_file(script,
               "import sys, wave\n"
               "src = wave.open(sys.argv[1], 'rb'); dst = wave.open(sys.argv[2], 'wb')\n"
               "dst.setparams(src.getparams())\n"
               "n = src.getnframes() // 2\n"
               "dst.writeframes(src.readframes(n))\n"
               "src.close(); dst.close()\n");
    auto clip = make_sine(440.0, 0.2, 16000, 0.5);
    auto result = apply_external_denoiser(clip, "python3 " + script + " {in} {out}");
    CHECK(result.warning.has_value());
    CHECK(result.clip.samples.size() < clip.samples.size());
}
