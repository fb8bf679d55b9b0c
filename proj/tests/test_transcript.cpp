#include <doctest.h>

#include <algorithm>

#include "c2i/transcript.hpp"

using namespace c2i;

namespace {

TranscriptSegment seg(double start, double end, const std::string& text,
                      Speaker sp = Speaker::customer) {
    TranscriptSegment s;
    s.start_s = start;
    s.end_s = end;
    s.text = text;
    s.speaker = sp;
    return s;
}

}  // namespace

TEST_CASE("merge: both lists empty -> empty transcript") {
    auto t = merge_channels({}, {}, "call-1");
    CHECK(t.call_id == "call-1");
    CHECK(t.segments.empty());
}

TEST_CASE("merge: alternating order preserved") {
    std::vector<TranscriptSegment> customer = {seg(0, 3, "oi"), seg(6, 9, "obrigado")};
    std::vector<TranscriptSegment> agent = {seg(3, 6, "bom dia", Speaker::agent)};
    auto t = merge_channels(agent, customer, "c");
    REQUIRE(t.segments.size() == 3);
    CHECK(t.segments[0].text == "oi");
    CHECK(t.segments[1].text == "bom dia");
    CHECK(t.segments[2].text == "obrigado");
}

TEST_CASE("merge: tie at same start puts customer first") {
    std::vector<TranscriptSegment> customer = {seg(1.0, 2.0, "c")};
    std::vector<TranscriptSegment> agent = {seg(1.0, 3.0, "a", Speaker::agent)};
    auto t = merge_channels(agent, customer, "c");
    REQUIRE(t.segments.size() == 2);
    CHECK(t.segments[0].speaker == Speaker::customer);
    CHECK(t.segments[1].speaker == Speaker::agent);
}

TEST_CASE("merge: same-speaker overlap rejected naming indices") {
    std::vector<TranscriptSegment> agent = {seg(0, 2, "a", Speaker::agent),
                                            seg(1.5, 3, "b", Speaker::agent)};
    try {
        merge_channels(agent, {}, "c");
        FAIL("expected rejection");
    } catch (const PipelineError& e) {
        std::string msg = e.what();
        CHECK(msg.find("0") != std::string::npos);
        CHECK(msg.find("1") != std::string::npos);
    }
}

TEST_CASE("merge: 50 random segments per speaker equals the merge oracle") {
    std::uint64_t state = 1234;
    std::vector<TranscriptSegment> agent, customer;
    double t_a = 0.0, t_c = 0.25;
    for (int i = 0; i < 50; ++i) {
        double len = 0.5 + splitmix_unit(state);
        agent.push_back(seg(t_a, t_a + len, "a" + std::to_string(i), Speaker::agent));
        t_a += len + 0.1 + splitmix_unit(state);
        len = 0.5 + splitmix_unit(state);
        customer.push_back(seg(t_c, t_c + len, "c" + std::to_string(i)));
        t_c += len + 0.1 + splitmix_unit(state);
    }
    auto merged = merge_channels(agent, customer, "rnd");

    // oracle: concatenate then stable sort by (start, customer-first, end)
    std::vector<TranscriptSegment> oracle = customer;
    oracle.insert(oracle.end(), agent.begin(), agent.end());
    std::stable_sort(oracle.begin(), oracle.end(), [](const auto& x, const auto& y) {
        if (x.start_s != y.start_s) return x.start_s < y.start_s;
        if (x.speaker != y.speaker) return x.speaker == Speaker::customer;
        return x.end_s < y.end_s;
    });
    REQUIRE(merged.segments.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        CHECK(merged.segments[i].text == oracle[i].text);
        CHECK(merged.segments[i].speaker == oracle[i].speaker);
    }

    // splitting by speaker recovers the inputs
    std::vector<std::string> recovered_agent;
    for (const auto& s : merged.segments)
        if (s.speaker == Speaker::agent) recovered_agent.push_back(s.text);
    REQUIRE(recovered_agent.size() == agent.size());
    for (std::size_t i = 0; i < agent.size(); ++i) CHECK(recovered_agent[i] == agent[i].text);
}

TEST_CASE("parse_external_asr_output: empty array") {
    CHECK(parse_external_asr_output("[]").empty());
}

TEST_CASE("parse_external_asr_output: end < start names the entry index") {
    try {
        parse_external_asr_output(R"([{"start":0,"end":1,"text":"ok"},{"start":5,"end":2,"text":"bad"}])");
        FAIL("expected error");
    } catch (const PipelineError& e) {
        CHECK(std::string(e.what()).find("1") != std::string::npos);
    }
}

TEST_CASE("parse_external_asr_output: shuffled entries re-sorted, empty text dropped") {
    auto segs = parse_external_asr_output(
        R"([{"start":4,"end":5,"text":"c"},{"start":0,"end":1,"text":"a"},)"
        R"({"start":2,"end":3,"text":"  "},{"start":1.5,"end":2,"text":"b"}])");
    REQUIRE(segs.size() == 3);
    CHECK(segs[0].text == "a");
    CHECK(segs[1].text == "b");
    CHECK(segs[2].text == "c");
}

TEST_CASE("parse_external_asr_output: malformed JSON reports a byte offset") {
    try {
        parse_external_asr_output("[{\"start\": 0, ");
        FAIL("expected error");
    } catch (const PipelineError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("transcript JSON round-trip") {
    CallTranscript t;
    t.call_id = "call-7";
    t.segments = {seg(0, 1.5, "olá, bom dia"), seg(1.5, 4.0, "em que posso ajudar?", Speaker::agent)};
    t.segments[1].confidence = 0.93;
    auto back = transcript_from_json(transcript_to_json(t));
    CHECK(back.call_id == t.call_id);
    REQUIRE(back.segments.size() == 2);
    CHECK(back.segments[0].text == "olá, bom dia");
    CHECK(back.segments[1].speaker == Speaker::agent);
    CHECK(back.segments[1].confidence.value() == doctest::Approx(0.93));
    CHECK(back.segments[1].start_s == doctest::Approx(1.5));
}
