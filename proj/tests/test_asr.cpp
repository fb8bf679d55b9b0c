#include <doctest.h>

#include "c2i/asr.hpp"
#include "helpers.hpp"

#include <httplib.h>

#include <atomic>
#include <thread>

using namespace c2i;
using testutil::make_sine;

TEST_CASE("transcribe: zero-duration clip is a precondition error") {
    AudioClip clip;
    clip.sample_rate_hz = 16000;
    MockAsrBackend backend;
    CHECK_THROWS_AS(transcribe(clip, Speaker::agent, backend), PipelineError);
}

TEST_CASE("mock fixture contract: registered digest wins, speaker overwritten") {
    auto clip = make_sine(440.0, 2.0, 16000, 0.5);
    MockAsrBackend backend;
    TranscriptSegment fixture;
    fixture.start_s = 0.0;
    fixture.end_s = 1.0;
    fixture.text = "alô";
    fixture.speaker = Speaker::customer;  // should be overwritten
    backend.register_fixture(clip_digest(clip), {fixture});
    auto segs = transcribe(clip, Speaker::agent, backend);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].text == "alô");
    CHECK(segs[0].speaker == Speaker::agent);
}

TEST_CASE("mock synthesis: deterministic, in-bounds, substantive closer") {
    auto clip = make_sine(300.0, 30.0, 16000, 0.5);
    MockAsrBackend backend;
    auto a = transcribe(clip, Speaker::agent, backend);
    auto b = transcribe(clip, Speaker::agent, backend);
    REQUIRE(!a.empty());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].text == b[i].text);
        CHECK(a[i].start_s >= 0.0);
        CHECK(a[i].end_s <= clip.duration_s());
        CHECK(a[i].start_s < a[i].end_s);
    }
    // last synthesized segment is a substantive turn (> 8 tokens)
    CHECK(split_ws(a.back().text).size() > 8);
}

TEST_CASE("clip_digest: distinct content gives distinct digests") {
    auto a = make_sine(440.0, 1.0, 16000, 0.5);
    auto b = make_sine(441.0, 1.0, 16000, 0.5);
    CHECK(clip_digest(a) == clip_digest(a));
    CHECK(clip_digest(a) != clip_digest(b));
    // same samples, different rate -> different digest
    auto c = a;
    c.sample_rate_hz = 8000;
    CHECK(clip_digest(a) != clip_digest(c));
}

TEST_CASE("command backend: fixture script emits two segments") {
    testutil::TempDir dir("cmdasr");
    std::string script = dir.file("asr.sh");
    write_file(script,
               "#!/bin/sh\n"
               "printf '[{\"start\":0,\"end\":2.0,\"text\":\"ol\\u00e1\"},"
               "{\"start\":2.5,\"end\":4.0,\"text\":\"bom dia\"}]'\n");
    REQUIRE(std::system(("chmod +x " + script).c_str()) == 0);
    CommandAsrBackend backend("sh " + script + " --audio {wav_path}");
    auto clip = make_sine(440.0, 5.0, 16000, 0.5);
    auto segs = transcribe(clip, Speaker::customer, backend);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].text == "olá");
    CHECK(segs[0].start_s == doctest::Approx(0.0));
    CHECK(segs[0].end_s == doctest::Approx(2.0));
    CHECK(segs[1].text == "bom dia");
    CHECK(segs[1].start_s == doctest::Approx(2.5));
    CHECK(segs[1].end_s == doctest::Approx(4.0));
}

TEST_CASE("command backend: nonzero exit surfaces as an error") {
    CommandAsrBackend backend("sh -c 'exit 3' ignored {wav_path}");
    auto clip = make_sine(440.0, 1.0, 16000, 0.5);
    CHECK_THROWS_AS(backend.recognize(clip), PipelineError);
}

TEST_CASE("http backend: fails twice then succeeds within the retry budget") {
    httplib::Server server;
    std::atomic<int> calls{0};
    server.Post("/asr", [&](const httplib::Request&, httplib::Response& res) {
        int n = ++calls;
        if (n <= 2) {
            res.status = 503;
            return;
        }
        res.set_content(R"([{"start":0,"end":1,"text":"oi"}])", "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    RetryPolicy retry;
    retry.max_attempts = 3;
    retry.base_delay_ms = 1;
    retry.jitter_ceiling_ms = 1;
    HttpAsrBackend backend("http://127.0.0.1:" + std::to_string(port) + "/asr", retry);
    auto clip = make_sine(440.0, 1.0, 16000, 0.5);
    auto segs = backend.recognize(clip);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].text == "oi");
    CHECK(calls.load() == 3);  // at-most-once acceptance: exactly one success consumed

    server.stop();
    t.join();
}

TEST_CASE("http backend: persistent failure surfaces after max attempts") {
    httplib::Server server;
    std::atomic<int> calls{0};
    server.Post("/asr", [&](const httplib::Request&, httplib::Response& res) {
        ++calls;
        res.status = 500;
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    RetryPolicy retry;
    retry.max_attempts = 2;
    retry.base_delay_ms = 1;
    retry.jitter_ceiling_ms = 1;
    HttpAsrBackend backend("http://127.0.0.1:" + std::to_string(port) + "/asr", retry);
    auto clip = make_sine(440.0, 1.0, 16000, 0.5);
    CHECK_THROWS_AS(backend.recognize(clip), PipelineError);
    CHECK(calls.load() == 2);

    server.stop();
    t.join();
}
