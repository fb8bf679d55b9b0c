#include <doctest.h>

#include <filesystem>

#include "c2i/pipeline.hpp"
#include "helpers.hpp"

using namespace c2i;
namespace fs = std::filesystem;

namespace {

using testutil::make_stereo_call_wav;
using testutil::write_call_fixture;

PipelineConfig fixture_config(const std::string& input_dir, const std::string& workspace_dir) {
    PipelineConfig cfg;
    cfg.input_dir = input_dir;
    cfg.workspace_dir = workspace_dir;
    cfg.embed_dim = 64;  // keep the fixture fast; the default dim is covered elsewhere
    return cfg;
}

}  // namespace

TEST_CASE("run_all on a 20-call fixture, then resume") {
    testutil::TempDir dir("pipe_runall");
    write_call_fixture(dir.file("in"), 20);
    Pipeline pipeline(fixture_config(dir.file("in"), dir.file("ws")));

    auto report = pipeline.run_all(false);
    REQUIRE(report.stages.size() == 10);
    for (const auto& s : report.stages) CHECK(!s.skipped);
    CHECK(report.stages[0].items == 20);  // ingest sees every call

    // manifest holds one record per stage
    auto manifest = WorkspaceManifest::load(dir.file("ws") + "/manifest.json");
    CHECK(manifest.records().size() == 10);
    for (const auto& stage : canonical_stages()) CHECK(manifest.find(stage) != nullptr);

    // dataset and report artifacts exist
    CHECK(fs::is_regular_file(dir.file("ws") + "/generate/dataset.jsonl"));
    CHECK(fs::is_regular_file(dir.file("ws") + "/validate/report.json"));
    CHECK(fs::is_regular_file(dir.file("ws") + "/ivr/decisions.jsonl"));

    REQUIRE(report.validation.has_value());
    const auto& vr = *report.validation;
    CHECK(vr.total_records > 0);
    CHECK(vr.leak_violations == 0);
    std::size_t skipped = 0;
    for (const auto& [reason, count] : vr.skipped_with_reason) skipped += count;
    CHECK(vr.pairs_out + skipped == vr.demands_in);

    // dataset decodes cleanly and every record is well-formed
    auto decoded = decode_instruct_jsonl(read_file(dir.file("ws") + "/generate/dataset.jsonl"));
    CHECK(decoded.errors.empty());
    CHECK(decoded.records.size() == vr.pairs_out);

    SUBCASE("resume skips every stage and still reports the validation gates") {
        auto second = pipeline.run_all(true);
        REQUIRE(second.stages.size() == 10);
        for (const auto& s : second.stages) {
            CHECK(s.skipped);
            CHECK(s.items == 0);
        }
        REQUIRE(second.validation.has_value());
        CHECK(second.validation->pairs_out == vr.pairs_out);
    }

    SUBCASE("resume reruns downstream stages when an input changes") {
        write_file(dir.file("in") + "/call-000.wav", make_stereo_call_wav(999999));
        auto second = pipeline.run_all(true);
        CHECK(!second.stages[0].skipped);  // ingest digest changed
    }
}

TEST_CASE("two fresh runs produce byte-identical datasets") {
    testutil::TempDir dir("pipe_repro");
    write_call_fixture(dir.file("in"), 6);
    Pipeline a(fixture_config(dir.file("in"), dir.file("ws_a")));
    Pipeline b(fixture_config(dir.file("in"), dir.file("ws_b")));
    a.run_all(false);
    b.run_all(false);
    auto bytes_a = read_file(dir.file("ws_a") + "/generate/dataset.jsonl");
    auto bytes_b = read_file(dir.file("ws_b") + "/generate/dataset.jsonl");
    CHECK(!bytes_a.empty());
    CHECK(bytes_a == bytes_b);
}

TEST_CASE("stage dependency: generate without index names the missing stage") {
    testutil::TempDir dir("pipe_dep");
    write_call_fixture(dir.file("in"), 1);
    Pipeline pipeline(fixture_config(dir.file("in"), dir.file("ws")));
    try {
        pipeline.run({"generate"}, false);
        FAIL("expected dependency error");
    } catch (const PipelineError& e) {
        CHECK(std::string(e.what()).find("index") != std::string::npos);
    }
}

TEST_CASE("stage list: out-of-order and unknown stages rejected") {
    testutil::TempDir dir("pipe_order");
    write_call_fixture(dir.file("in"), 1);
    Pipeline pipeline(fixture_config(dir.file("in"), dir.file("ws")));
    CHECK_THROWS_AS(pipeline.run({"ivr", "ingest"}, false), PipelineError);
    CHECK_THROWS_AS(pipeline.run({"teleport"}, false), PipelineError);
}

TEST_CASE("ingest: empty input directory is a stage failure") {
    testutil::TempDir dir("pipe_empty");
    fs::create_directories(dir.file("in"));
    Pipeline pipeline(fixture_config(dir.file("in"), dir.file("ws")));
    CHECK_THROWS_AS(pipeline.run({"ingest"}, false), PipelineError);
}

TEST_CASE("partial run then continuation completes the pipeline") {
    testutil::TempDir dir("pipe_partial");
    write_call_fixture(dir.file("in"), 3);
    Pipeline pipeline(fixture_config(dir.file("in"), dir.file("ws")));
    auto first = pipeline.run({"ingest", "ivr", "asr"}, false);
    CHECK(first.stages.size() == 3);
    auto rest = pipeline.run({"clean", "anonymize", "extract", "embed", "index", "generate",
                              "validate"},
                             false);
    CHECK(rest.stages.size() == 7);
    REQUIRE(rest.validation.has_value());
    CHECK(fs::is_regular_file(dir.file("ws") + "/generate/dataset.jsonl"));
}
