#pragma once

#include <optional>
#include <string>
#include <vector>

#include "c2i/common.hpp"

namespace c2i {

enum class Speaker { customer, agent };

const char* to_string(Speaker s);
Speaker speaker_from_string(std::string_view s);

struct TranscriptSegment {
    double start_s = 0.0;
    double end_s = 0.0;
    std::string text;
    Speaker speaker = Speaker::customer;
    std::optional<double> confidence;
};

struct CallTranscript {
    std::string call_id;
    std::vector<TranscriptSegment> segments;  // sorted by start_s, customer before agent on ties
};

// Interleave per-channel segment lists by start_s. Ties break customer-before-agent,
// then by end_s. Same-speaker overlap within an input list is rejected.
CallTranscript merge_channels(const std::vector<TranscriptSegment>& agent_segments,
                              const std::vector<TranscriptSegment>& customer_segments,
                              const std::string& call_id);

// Wire format for external ASR backends: UTF-8 JSON array of {start, end, text}.
// Entries are validated and re-sorted; empty-text entries are dropped.
std::vector<TranscriptSegment> parse_external_asr_output(std::string_view bytes);

std::string transcript_to_json(const CallTranscript& t);
CallTranscript transcript_from_json(std::string_view json_text);

}  // namespace c2i
