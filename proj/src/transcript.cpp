#include "c2i/transcript.hpp"

#include <algorithm>

#include <json.hpp>

namespace c2i {

using nlohmann::json;

const char* to_string(Speaker s) { return s == Speaker::customer ? "customer" : "agent"; }

Speaker speaker_from_string(std::string_view s) {
    if (s == "customer") return Speaker::customer;
    if (s == "agent") return Speaker::agent;
    throw PipelineError("unknown speaker label: " + std::string(s));
}

namespace {

void check_no_overlap(const std::vector<TranscriptSegment>& segs, const char* who) {
    for (std::size_t i = 1; i < segs.size(); ++i) {
        if (segs[i].start_s < segs[i - 1].end_s)
            throw PipelineError(std::string("overlapping ") + who + " segments at indices " +
                                std::to_string(i - 1) + " and " + std::to_string(i));
    }
}

bool segment_before(const TranscriptSegment& a, const TranscriptSegment& b) {
    if (a.start_s != b.start_s) return a.start_s < b.start_s;
    if (a.speaker != b.speaker) return a.speaker == Speaker::customer;
    return a.end_s < b.end_s;
}

}  // namespace

CallTranscript merge_channels(const std::vector<TranscriptSegment>& agent_segments,
                              const std::vector<TranscriptSegment>& customer_segments,
                              const std::string& call_id) {
    auto a = agent_segments;
    auto c = customer_segments;
    auto by_start = [](const TranscriptSegment& x, const TranscriptSegment& y) {
        return x.start_s < y.start_s;
    };
    std::stable_sort(a.begin(), a.end(), by_start);
    std::stable_sort(c.begin(), c.end(), by_start);
    check_no_overlap(a, "agent");
    check_no_overlap(c, "customer");
    for (auto& s : a) s.speaker = Speaker::agent;
    for (auto& s : c) s.speaker = Speaker::customer;

    CallTranscript out;
    out.call_id = call_id;
    out.segments.reserve(a.size() + c.size());
    std::merge(c.begin(), c.end(), a.begin(), a.end(), std::back_inserter(out.segments),
               segment_before);
    return out;
}

std::vector<TranscriptSegment> parse_external_asr_output(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw PipelineError("ASR output parse failure at byte " + std::to_string(e.byte) + ": " +
                            e.what());
    }
    if (!doc.is_array()) throw PipelineError("ASR output must be a JSON array");
    std::vector<TranscriptSegment> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& e = doc[i];
        if (!e.is_object() || !e.contains("start") || !e.contains("end") || !e.contains("text"))
            throw PipelineError("ASR entry " + std::to_string(i) + " missing start/end/text");
        TranscriptSegment seg;
        seg.start_s = e["start"].get<double>();
        seg.end_s = e["end"].get<double>();
        seg.text = trim(e["text"].get<std::string>());
        if (seg.start_s < 0 || seg.end_s < 0)
            throw PipelineError("ASR entry " + std::to_string(i) + " has a negative timestamp");
        if (seg.end_s < seg.start_s)
            throw PipelineError("ASR entry " + std::to_string(i) + " has end < start");
        if (e.contains("confidence")) seg.confidence = e["confidence"].get<double>();
        if (seg.text.empty() || seg.end_s == seg.start_s) continue;
        out.push_back(std::move(seg));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return x.start_s < y.start_s;
    });
    return out;
}

std::string transcript_to_json(const CallTranscript& t) {
    json segs = json::array();
    for (const auto& s : t.segments) {
        json e = {{"start", s.start_s}, {"end", s.end_s}, {"text", s.text},
                  {"speaker", to_string(s.speaker)}};
        if (s.confidence) e["confidence"] = *s.confidence;
        segs.push_back(std::move(e));
    }
    return json{{"call_id", t.call_id}, {"segments", std::move(segs)}}.dump();
}

CallTranscript transcript_from_json(std::string_view json_text) {
    json doc = json::parse(json_text);
    CallTranscript t;
    t.call_id = doc.at("call_id").get<std::string>();
    for (const auto& e : doc.at("segments")) {
        TranscriptSegment s;
        s.start_s = e.at("start").get<double>();
        s.end_s = e.at("end").get<double>();
        s.text = e.at("text").get<std::string>();
        s.speaker = speaker_from_string(e.at("speaker").get<std::string>());
        if (e.contains("confidence")) s.confidence = e["confidence"].get<double>();
        t.segments.push_back(std::move(s));
    }
    return t;
}

}  // namespace c2i
