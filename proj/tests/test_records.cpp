#include <doctest.h>

#include "c2i/records.hpp"

using namespace c2i;

namespace {

InstructRecord random_record(std::uint64_t& state) {
    static const std::vector<std::string> words = {
        "fatura", "plano",  "cancelar", "segunda", "via",     "valor", "conta",
        "quero",  "prazo",  "internet", "sinal",   "upgrade", "dados", "vencimento",
        "ação",   "número", "telefone", "serviço", "início",  "fim",
    };
    auto sentence = [&](std::size_t n) {
        std::vector<std::string> toks;
        for (std::size_t i = 0; i < n; ++i) toks.push_back(words[splitmix64(state) % words.size()]);
        return join(toks, " ");
    };
    InstructRecord r;
    r.instruction = sentence(3 + splitmix64(state) % 6);
    r.input = sentence(4 + splitmix64(state) % 10);
    r.output = sentence(5 + splitmix64(state) % 20);
    r.meta.demand_id = "d" + std::to_string(splitmix64(state) % 100000);
    r.meta.source_call_id = "call-" + std::to_string(splitmix64(state) % 10000);
    std::size_t n_cands = splitmix64(state) % 4;
    for (std::size_t i = 0; i < n_cands; ++i)
        r.meta.candidate_call_ids.push_back("call-" + std::to_string(splitmix64(state) % 10000));
    r.meta.template_id = "t" + std::to_string(splitmix64(state) % 5);
    return r;
}

}  // namespace

TEST_CASE("validate_record: non-empty fields required") {
    InstructRecord r;
    r.instruction = "i";
    r.input = "in";
    r.output = "out";
    CHECK_NOTHROW(validate_record(r));
    r.output = "  ";
    CHECK_THROWS_AS(validate_record(r), PipelineError);
}

TEST_CASE("jsonl: empty list -> empty stream -> empty list") {
    auto encoded = encode_instruct_jsonl({});
    CHECK(encoded.empty());
    auto decoded = decode_instruct_jsonl(encoded);
    CHECK(decoded.records.empty());
    CHECK(decoded.errors.empty());
}

TEST_CASE("jsonl: 1000 random records round-trip field-for-field") {
    std::uint64_t state = 20240817;
    std::vector<InstructRecord> records;
    for (int i = 0; i < 1000; ++i) records.push_back(random_record(state));
    auto decoded = decode_instruct_jsonl(encode_instruct_jsonl(records));
    REQUIRE(decoded.errors.empty());
    REQUIRE(decoded.records.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) CHECK(decoded.records[i] == records[i]);
}

TEST_CASE("jsonl: one record per line, UTF-8 preserved") {
    std::uint64_t state = 3;
    auto r = random_record(state);
    r.input = "ação é número três";
    auto encoded = encode_instruct_jsonl({r});
    CHECK(std::count(encoded.begin(), encoded.end(), '\n') == 1);
    auto decoded = decode_instruct_jsonl(encoded);
    REQUIRE(decoded.records.size() == 1);
    CHECK(decoded.records[0].input == "ação é número três");
}

TEST_CASE("jsonl decode: per-line errors with line numbers, valid lines kept") {
    std::uint64_t state = 4;
    auto good = random_record(state);
    std::string stream = encode_instruct_jsonl({good});
    stream += "this is not json\n";
    stream += R"({"instruction":"i","input":"in","output":"","meta":{"demand_id":"d","source_call_id":"c","candidate_call_ids":[],"template_id":"t","pipeline_version":"v"}})";
    stream += "\n";
    stream += encode_instruct_jsonl({good});

    auto decoded = decode_instruct_jsonl(stream);
    CHECK(decoded.records.size() == 2);
    REQUIRE(decoded.errors.size() == 2);
    CHECK(decoded.errors[0].line_number == 2);
    CHECK(decoded.errors[1].line_number == 3);  // empty "output" violates the invariant
}

TEST_CASE("jsonl decode: missing keys reported") {
    auto decoded = decode_instruct_jsonl(R"({"instruction":"x"})" "\n");
    CHECK(decoded.records.empty());
    REQUIRE(decoded.errors.size() == 1);
    CHECK(decoded.errors[0].line_number == 1);
}
