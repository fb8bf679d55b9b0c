#include "c2i/anonymize.hpp"

#include <algorithm>
#include <cctype>

namespace c2i {

const char* to_string(PiiCategory c) {
    switch (c) {
        case PiiCategory::NAME: return "NAME";
        case PiiCategory::ACCOUNT_ID: return "ACCOUNT_ID";
        case PiiCategory::PHONE: return "PHONE";
        case PiiCategory::EMAIL: return "EMAIL";
        case PiiCategory::DOC_ID: return "DOC_ID";
        case PiiCategory::ADDRESS: return "ADDRESS";
    }
    return "?";
}

PiiCategory pii_category_from_string(std::string_view s) {
    if (s == "NAME") return PiiCategory::NAME;
    if (s == "ACCOUNT_ID") return PiiCategory::ACCOUNT_ID;
    if (s == "PHONE") return PiiCategory::PHONE;
    if (s == "EMAIL") return PiiCategory::EMAIL;
    if (s == "DOC_ID") return PiiCategory::DOC_ID;
    if (s == "ADDRESS") return PiiCategory::ADDRESS;
    throw ConfigError("unknown PII category: " + std::string(s));
}

std::string placeholder_for(PiiCategory c) { return std::string("<") + to_string(c) + ">"; }

namespace {

PiiRule make_rule(PiiCategory cat, bool dict, std::string payload, int priority,
                  const std::string& origin) {
    PiiRule rule;
    rule.category = cat;
    rule.is_dictionary = dict;
    rule.payload = std::move(payload);
    rule.priority = priority;
    if (dict) {
        for (auto& w : split(rule.payload, ',')) {
            std::string word = trim(w);
            if (!word.empty()) rule.dictionary.push_back(std::move(word));
        }
        if (rule.dictionary.empty())
            throw ConfigError(origin + ": empty dictionary for " + to_string(cat));
    } else {
        // a payload of the form `N:regex` pulls the span from capture group N
        std::string source = rule.payload;
        if (source.size() > 2 && std::isdigit(static_cast<unsigned char>(source[0])) &&
            source[1] == ':') {
            rule.capture_group = source[0] - '0';
            source = source.substr(2);
        }
        try {
            rule.pattern = std::regex(source, std::regex::ECMAScript | std::regex::icase);
        } catch (const std::regex_error& e) {
            throw ConfigError(origin + ": invalid pattern for " + to_string(cat) + ": " + e.what());
        }
    }
    return rule;
}

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

}  // namespace

std::vector<PiiRule> parse_pii_rules(std::string_view contents, const std::string& origin) {
    std::vector<PiiRule> rules;
    std::size_t line_no = 0;
    for (const auto& raw_line : split(std::string(contents), '\n')) {
        ++line_no;
        std::string line = raw_line;
        if (trim(line).empty() || starts_with(trim(line), "#")) continue;
        auto fields = split(line, '\t');
        std::string where = origin + ":" + std::to_string(line_no);
        if (fields.size() != 4)
            throw ConfigError(where + ": expected 4 tab-separated fields, got " +
                              std::to_string(fields.size()));
        PiiCategory cat = pii_category_from_string(trim(fields[0]));
        std::string kind = trim(fields[1]);
        if (kind != "pattern" && kind != "dict")
            throw ConfigError(where + ": rule kind must be pattern or dict");
        int priority;
        try {
            priority = std::stoi(trim(fields[3]));
        } catch (...) {
            throw ConfigError(where + ": priority must be an integer");
        }
        rules.push_back(make_rule(cat, kind == "dict", fields[2], priority, where));
    }
    return rules;
}

std::vector<PiiRule> load_pii_rules(const std::string& path) {
    return parse_pii_rules(read_file(path), path);
}

const std::vector<PiiRule>& default_pii_rules() {
    static const std::vector<PiiRule> rules = [] {
        std::vector<PiiRule> r;
        r.push_back(make_rule(PiiCategory::EMAIL, false,
                              R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})", 10, "builtin"));
        // Brazilian CPF shape: 11 digits with optional separators
        r.push_back(make_rule(PiiCategory::DOC_ID, false,
                              R"(\b(\d{3}\.\d{3}\.\d{3}-\d{2}|\d{11})(?!\d))", 8, "builtin"));
        r.push_back(make_rule(
            PiiCategory::ACCOUNT_ID, false,
            R"(1:(?:conta|account|contrato|protocolo|cadastro)(?:\s+(?:é|e|número|numero|n[º°]?\.?))?\s+(\d{6,12})(?!\d))",
            6, "builtin"));
        r.push_back(make_rule(PiiCategory::PHONE, false,
                              R"(\b(?:\(?\d{2,3}\)?[\s.-])?\d{3,5}[-.]\d{4}(?!\d))", 5, "builtin"));
        r.push_back(make_rule(
            PiiCategory::NAME, true,
            "João,Joao,Maria,José,Jose,Ana,Carlos,Paulo,Pedro,Lucas,Marcos,Fernanda,"
            "Juliana,Rafael,Camila,Bruno,Mariana,Felipe,Beatriz,Gustavo",
            3, "builtin"));
        r.push_back(make_rule(
            PiiCategory::ADDRESS, false,
            R"((?:rua|avenida|av\.|travessa|alameda)\s+[A-Za-zÀ-ÿ ]{3,40},?\s*(?:n[º°]?\.?\s*)?\d{1,5})",
            4, "builtin"));
        return r;
    }();
    return rules;
}

std::vector<PiiSpan> detect_pii(const std::string& text, const std::vector<PiiRule>& rules) {
    struct Candidate {
        std::size_t start, end;
        PiiCategory category;
        int priority;
    };
    std::vector<Candidate> candidates;

    for (const auto& rule : rules) {
        if (rule.is_dictionary) {
            for (const auto& word : rule.dictionary) {
                std::size_t pos = 0;
                while ((pos = text.find(word, pos)) != std::string::npos) {
                    bool left_ok = pos == 0 || !is_word_byte(static_cast<unsigned char>(text[pos - 1]));
                    std::size_t after = pos + word.size();
                    bool right_ok =
                        after >= text.size() || !is_word_byte(static_cast<unsigned char>(text[after]));
                    if (left_ok && right_ok)
                        candidates.push_back({pos, after, rule.category, rule.priority});
                    pos += word.size();
                }
            }
        } else {
            auto begin = std::sregex_iterator(text.begin(), text.end(), rule.pattern);
            for (auto it = begin; it != std::sregex_iterator(); ++it) {
                const auto& m = *it;
                int g = rule.capture_group;
                if (g >= int(m.size()) || !m[std::size_t(g)].matched) continue;
                auto start = std::size_t(m.position(std::size_t(g)));
                auto len = std::size_t(m.length(std::size_t(g)));
                if (len == 0) continue;
                candidates.push_back({start, start + len, rule.category, rule.priority});
            }
        }
    }

    // overlap policy: longest-match-first, then higher priority, then leftmost
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        std::size_t la = a.end - a.start, lb = b.end - b.start;
        if (la != lb) return la > lb;
        if (a.priority != b.priority) return a.priority > b.priority;
        return a.start < b.start;
    });
    std::vector<Candidate> accepted;
    for (const auto& c : candidates) {
        bool overlaps = std::any_of(accepted.begin(), accepted.end(), [&](const Candidate& a) {
            return c.start < a.end && a.start < c.end;
        });
        if (!overlaps) accepted.push_back(c);
    }
    std::sort(accepted.begin(), accepted.end(),
              [](const Candidate& a, const Candidate& b) { return a.start < b.start; });

    std::vector<PiiSpan> spans;
    for (const auto& c : accepted) {
        PiiSpan span;
        span.start = c.start;
        span.end = c.end;
        span.category = c.category;
        span.original_digest = to_hex(fnv1a64(std::string_view(text).substr(c.start, c.end - c.start)));
        spans.push_back(std::move(span));
    }
    return spans;
}

std::string redact(const std::string& text, const std::vector<PiiSpan>& spans,
                   RedactionReport* report) {
    for (const auto& s : spans)
        if (s.start >= s.end || s.end > text.size())
            throw PipelineError("redact: span out of bounds");
    std::string out = text;
    // right-to-left so earlier offsets stay valid
    std::vector<PiiSpan> ordered = spans;
    std::sort(ordered.begin(), ordered.end(),
              [](const PiiSpan& a, const PiiSpan& b) { return a.start > b.start; });
    RedactionReport local;
    for (const auto& s : ordered) {
        out.replace(s.start, s.end - s.start, placeholder_for(s.category));
        local.category_counts[to_string(s.category)] += 1;
    }
    if (report) *report = std::move(local);
    return out;
}

std::vector<LeakViolation> leak_scan(const std::vector<InstructRecord>& records,
                                     const std::vector<PiiRule>& rules) {
    std::vector<LeakViolation> violations;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::pair<const char*, const std::string*> fields[] = {
            {"instruction", &records[i].instruction},
            {"input", &records[i].input},
            {"output", &records[i].output},
        };
        for (const auto& [name, value] : fields) {
            for (const auto& span : detect_pii(*value, rules))
                violations.push_back({i, name, span.category});
        }
    }
    return violations;
}

}  // namespace c2i
