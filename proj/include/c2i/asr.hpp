#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "c2i/audio.hpp"
#include "c2i/transcript.hpp"

namespace c2i {

struct RetryPolicy {
    int max_attempts = 3;
    int base_delay_ms = 100;
    int jitter_ceiling_ms = 50;
    std::uint64_t jitter_seed = 1;
};

// Content digest keying mock fixtures; stable for a given sample stream + rate.
std::string clip_digest(const AudioClip& clip);

class AsrBackend {
public:
    virtual ~AsrBackend() = default;
    virtual std::vector<TranscriptSegment> recognize(const AudioClip& clip) = 0;
};

// Deterministic offline backend. A fixture registered under the clip digest wins;
// otherwise a pseudo-transcript is synthesized from the digest so full pipeline
// runs work on arbitrary audio.
class MockAsrBackend : public AsrBackend {
public:
    void register_fixture(const std::string& digest, std::vector<TranscriptSegment> segments);
    std::vector<TranscriptSegment> recognize(const AudioClip& clip) override;

private:
    std::map<std::string, std::vector<TranscriptSegment>> fixtures_;
};

// `<cmd> --audio {wav_path}` writing the JSON segment array to stdout.
class CommandAsrBackend : public AsrBackend {
public:
    explicit CommandAsrBackend(std::string command) : command_(std::move(command)) {}
    std::vector<TranscriptSegment> recognize(const AudioClip& clip) override;

private:
    std::string command_;
};

// POST audio bytes to the endpoint, receive the JSON segment array.
class HttpAsrBackend : public AsrBackend {
public:
    HttpAsrBackend(std::string endpoint, RetryPolicy retry) :
        endpoint_(std::move(endpoint)), retry_(retry) {}
    std::vector<TranscriptSegment> recognize(const AudioClip& clip) override;

private:
    std::string endpoint_;
    RetryPolicy retry_;
};

// Runs the backend and stamps every segment with the given speaker, clamping
// timestamps into [0, duration].
std::vector<TranscriptSegment> transcribe(const AudioClip& clip, Speaker speaker,
                                          AsrBackend& backend);

}  // namespace c2i
