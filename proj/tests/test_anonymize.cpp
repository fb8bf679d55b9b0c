#include <doctest.h>

#include "c2i/anonymize.hpp"

using namespace c2i;

TEST_CASE("detect: email reference pattern") {
    auto spans = detect_pii("meu email é joao@mail.com", default_pii_rules());
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].category == PiiCategory::EMAIL);
    std::string text = "meu email é joao@mail.com";
    CHECK(text.substr(spans[0].start, spans[0].end - spans[0].start) == "joao@mail.com");
    CHECK(!spans[0].original_digest.empty());
}

TEST_CASE("detect: no matches -> empty list") {
    CHECK(detect_pii("bom dia, tudo bem?", default_pii_rules()).empty());
}

TEST_CASE("detect: account digits + name dictionary give two disjoint spans") {
    std::string text = "conta 12345678 do João";
    auto spans = detect_pii(text, default_pii_rules());
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].category == PiiCategory::ACCOUNT_ID);
    CHECK(text.substr(spans[0].start, spans[0].end - spans[0].start) == "12345678");
    CHECK(spans[1].category == PiiCategory::NAME);
    CHECK(text.substr(spans[1].start, spans[1].end - spans[1].start) == "João");
    CHECK(spans[0].end <= spans[1].start);
}

TEST_CASE("detect: longest match wins overlaps") {
    // CPF (11 digits) also contains shorter digit patterns; DOC_ID must win
    std::string text = "cpf 123.456.789-01 ok";
    auto spans = detect_pii(text, default_pii_rules());
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].category == PiiCategory::DOC_ID);
    CHECK(text.substr(spans[0].start, spans[0].end - spans[0].start) == "123.456.789-01");
}

TEST_CASE("detect: phone and address patterns") {
    auto rules = default_pii_rules();
    std::string phone = "liga no 62 99876-1234 depois";
    auto spans = detect_pii(phone, rules);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].category == PiiCategory::PHONE);

    std::string addr = "moro na rua das Flores, 123 em Goiânia";
    spans = detect_pii(addr, rules);
    REQUIRE(!spans.empty());
    CHECK(spans[0].category == PiiCategory::ADDRESS);
}

TEST_CASE("redact: documented traces") {
    SUBCASE("empty span list is the identity") {
        CHECK(redact("texto qualquer", {}) == "texto qualquer");
    }
    SUBCASE("one phone span becomes exactly one placeholder") {
        std::string text = "liga 999-1234 hoje";
        auto spans = detect_pii(text, default_pii_rules());
        REQUIRE(spans.size() == 1);
        RedactionReport report;
        CHECK(redact(text, spans, &report) == "liga <PHONE> hoje");
        CHECK(report.category_counts.at("PHONE") == 1);
    }
    SUBCASE("out-of-bounds span rejected") {
        PiiSpan bad;
        bad.start = 2;
        bad.end = 99;
        CHECK_THROWS_AS(redact("curto", {bad}), PipelineError);
    }
}

TEST_CASE("redact: idempotent — placeholders never re-match") {
    std::string text = "sou o João, conta 12345678, email joao@mail.com, fone 62 99876-1234, "
                       "cpf 123.456.789-01, moro na rua das Flores, 123";
    auto once = redact(text, detect_pii(text, default_pii_rules()));
    auto twice = redact(once, detect_pii(once, default_pii_rules()));
    CHECK(once == twice);
    CHECK(detect_pii(once, default_pii_rules()).empty());
}

TEST_CASE("redact: non-span bytes preserved byte-for-byte") {
    std::string text = "prefixo João sufixo";
    auto spans = detect_pii(text, default_pii_rules());
    REQUIRE(spans.size() == 1);
    CHECK(redact(text, spans) == "prefixo <NAME> sufixo");
}

TEST_CASE("closure fuzz: detect -> redact -> leak_scan finds nothing") {
    const std::vector<std::string> pii_bits = {
        "maria@corp.com.br", "123.456.789-01", "99991111222", "conta 987654321",
        "João", "Fernanda", "(62) 3232-1010", "rua Sete de Setembro, 45",
    };
    const std::vector<std::string> fillers = {
        "bom dia", "eu queria falar sobre", "por favor verifique", "obrigado pela atenção",
        "o plano está lento", "desde ontem à noite", "pode confirmar para mim",
    };
    std::uint64_t state = 424242;
    int total_spans = 0;
    for (int i = 0; i < 200; ++i) {
        std::string text;
        std::size_t parts = 2 + splitmix64(state) % 5;
        for (std::size_t p = 0; p < parts; ++p) {
            if (!text.empty()) text += " ";
            if (splitmix64(state) % 2 == 0)
                text += pii_bits[splitmix64(state) % pii_bits.size()];
            else
                text += fillers[splitmix64(state) % fillers.size()];
        }
        auto spans = detect_pii(text, default_pii_rules());
        total_spans += int(spans.size());
        std::string clean = redact(text, spans);
        InstructRecord r;
        r.instruction = "check";
        r.input = clean;
        r.output = clean;
        auto violations = leak_scan({r}, default_pii_rules());
        INFO("text: ", text, " -> ", clean);
        CHECK(violations.empty());
    }
    CHECK(total_spans > 100);  // the fuzz corpus actually exercised the rules
}

TEST_CASE("leak_scan: documented traces") {
    SUBCASE("hand-built record with a phone pattern") {
        InstructRecord r;
        r.instruction = "ok";
        r.input = "ok";
        r.output = "ligue para 999-1234 amanhã";
        auto violations = leak_scan({r}, default_pii_rules());
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].record_index == 0);
        CHECK(violations[0].field == "output");
        CHECK(violations[0].category == PiiCategory::PHONE);
    }
    SUBCASE("empty dataset") { CHECK(leak_scan({}, default_pii_rules()).empty()); }
}

TEST_CASE("rule file parsing") {
    SUBCASE("valid file with comments") {
        auto rules = parse_pii_rules("# comment\n"
                                     "EMAIL\tpattern\t\\w+@\\w+\\.com\t9\n"
                                     "NAME\tdict\tAlice, Bob\t2\n",
                                     "test");
        REQUIRE(rules.size() == 2);
        CHECK(rules[0].category == PiiCategory::EMAIL);
        CHECK(rules[0].priority == 9);
        CHECK(rules[1].is_dictionary);
        CHECK(rules[1].dictionary == std::vector<std::string>{"Alice", "Bob"});
    }
    SUBCASE("invalid regex reported at load with location") {
        try {
            parse_pii_rules("PHONE\tpattern\t([bad\t1\n", "rules.tsv");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("rules.tsv:1") != std::string::npos);
        }
    }
    SUBCASE("wrong field count / kind / category / priority") {
        CHECK_THROWS_AS(parse_pii_rules("EMAIL\tpattern\tx\n", "t"), ConfigError);
        CHECK_THROWS_AS(parse_pii_rules("EMAIL\tfuzzy\tx\t1\n", "t"), ConfigError);
        CHECK_THROWS_AS(parse_pii_rules("WHAT\tpattern\tx\t1\n", "t"), ConfigError);
        CHECK_THROWS_AS(parse_pii_rules("EMAIL\tpattern\tx\thigh\n", "t"), ConfigError);
    }
    SUBCASE("capture-group payload selects the group span") {
        auto rules = parse_pii_rules("ACCOUNT_ID\tpattern\t1:id (\\d+)\t5\n", "t");
        std::string text = "meu id 4455 aqui";
        auto spans = detect_pii(text, rules);
        REQUIRE(spans.size() == 1);
        CHECK(text.substr(spans[0].start, spans[0].end - spans[0].start) == "4455");
    }
}
