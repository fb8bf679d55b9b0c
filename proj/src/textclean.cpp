#include "c2i/textclean.hpp"

#include <algorithm>
#include <cctype>

namespace c2i {
namespace {

struct TokenParts {
    std::string prefix;  // leading punctuation
    std::string core;    // stripped, lowercased word
    std::string suffix;  // trailing punctuation
};

TokenParts split_token(const std::string& token) {
    auto is_word = [](unsigned char c) { return std::isalnum(c) || c >= 0x80; };
    std::size_t b = 0, e = token.size();
    while (b < e && !is_word(static_cast<unsigned char>(token[b]))) ++b;
    while (e > b && !is_word(static_cast<unsigned char>(token[e - 1]))) --e;
    return {token.substr(0, b), to_lower(token.substr(b, e - b)), token.substr(e)};
}

enum class NumClass { unit, zero, teen, tens, hundred_mult, hundred_val, thousand, none };

NumClass classify(long v, const std::string& word, const NumeralLexicon& lex) {
    (void)lex;
    if (v == 0) return NumClass::zero;
    if (v >= 1 && v <= 9) return NumClass::unit;
    if (v >= 10 && v <= 19) return NumClass::teen;
    if (v >= 20 && v <= 90 && v % 10 == 0) return NumClass::tens;
    if (v == 100) return (word == "hundred") ? NumClass::hundred_mult : NumClass::hundred_val;
    if (v >= 200 && v <= 900 && v % 100 == 0) return NumClass::hundred_val;
    if (v == 1000) return NumClass::thousand;
    return NumClass::none;
}

// Evaluates a run of numeral words (connectives removed). Returns nothing when
// the sequence is not a well-formed cardinal in 0..9999.
std::optional<long> evaluate_run(const std::vector<std::string>& words,
                                 const NumeralLexicon& lex) {
    if (words.empty()) return std::nullopt;

    // digit-word runs concatenate positionally: "two zero zero" -> 200
    if (words.size() >= 2) {
        bool all_digits = true;
        long concat = 0;
        for (const auto& w : words) {
            long v = lex.values.at(w);
            if (v < 0 || v > 9) {
                all_digits = false;
                break;
            }
            concat = concat * 10 + v;
        }
        if (all_digits) return concat <= 9999 ? std::optional<long>(concat) : std::nullopt;
    }

    if (words.size() == 1) {
        long v = lex.values.at(words[0]);
        if (words[0] == "hundred") return std::nullopt;  // bare multiplier
        return v <= 9999 ? std::optional<long>(v) : std::nullopt;
    }

    std::size_t i = 0, n = words.size();
    auto value = [&](std::size_t idx) { return lex.values.at(words[idx]); };
    auto cls = [&](std::size_t idx) { return classify(value(idx), words[idx], lex); };
    long total = 0;

    if (cls(i) == NumClass::unit && i + 1 < n && cls(i + 1) == NumClass::thousand) {
        total += value(i) * 1000;
        i += 2;
    } else if (cls(i) == NumClass::thousand) {
        total += 1000;
        i += 1;
    }
    if (i < n) {
        if (cls(i) == NumClass::hundred_val) {
            total += value(i);
            i += 1;
        } else if (cls(i) == NumClass::unit && i + 1 < n && cls(i + 1) == NumClass::hundred_mult) {
            total += value(i) * 100;
            i += 2;
        } else if (cls(i) == NumClass::hundred_mult) {
            total += 100;
            i += 1;
        }
    }
    if (i < n) {
        if (cls(i) == NumClass::teen) {
            total += value(i);
            i += 1;
        } else if (cls(i) == NumClass::tens) {
            total += value(i);
            i += 1;
            if (i < n && cls(i) == NumClass::unit) {
                total += value(i);
                i += 1;
            }
        } else if (cls(i) == NumClass::unit) {
            total += value(i);
            i += 1;
        }
    }
    if (i != n || total > 9999) return std::nullopt;
    return total;
}

bool ends_with_terminal(const std::string& text) {
    if (text.empty()) return false;
    char last = text.back();
    if (last == '.' || last == '?' || last == '!') return true;
    // UTF-8 ellipsis
    return text.size() >= 3 && text.compare(text.size() - 3, 3, "\xe2\x80\xa6") == 0;
}

// Uppercases the first alphabetic character of each sentence, carrying the
// "expect capital" state across segment boundaries.
void capitalize_sentences(std::string& text, bool& expect_capital) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (c == '.' || c == '?' || c == '!') {
            expect_capital = true;
        } else if (std::isalpha(c)) {
            if (expect_capital) text[i] = char(std::toupper(c));
            expect_capital = false;
        } else if (c == 0xC3 && i + 1 < text.size()) {
            unsigned char c2 = static_cast<unsigned char>(text[i + 1]);
            if (c2 >= 0xA0 && c2 <= 0xBE && c2 != 0xB7) {  // Latin-1 lowercase block
                if (expect_capital) text[i + 1] = char(c2 - 0x20);
                expect_capital = false;
            }
            ++i;
        } else if (c >= 0x80) {
            // other multi-byte character: treat as word content
            expect_capital = false;
        }
    }
}

}  // namespace

NumeralLexicon portuguese_numerals() {
    NumeralLexicon lex;
    lex.language = "pt";
    lex.connectives = {"e"};
    lex.values = {
        {"zero", 0},     {"um", 1},        {"uma", 1},       {"dois", 2},      {"duas", 2},
        {"três", 3},     {"tres", 3},      {"quatro", 4},    {"cinco", 5},     {"seis", 6},
        {"meia", 6},     {"sete", 7},      {"oito", 8},      {"nove", 9},      {"dez", 10},
        {"onze", 11},    {"doze", 12},     {"treze", 13},    {"catorze", 14},  {"quatorze", 14},
        {"quinze", 15},  {"dezesseis", 16},{"dezessete", 17},{"dezoito", 18},  {"dezenove", 19},
        {"vinte", 20},   {"trinta", 30},   {"quarenta", 40}, {"cinquenta", 50},{"sessenta", 60},
        {"setenta", 70}, {"oitenta", 80},  {"noventa", 90},  {"cem", 100},     {"cento", 100},
        {"duzentos", 200},  {"duzentas", 200},  {"trezentos", 300},   {"trezentas", 300},
        {"quatrocentos", 400}, {"quatrocentas", 400}, {"quinhentos", 500}, {"quinhentas", 500},
        {"seiscentos", 600}, {"seiscentas", 600}, {"setecentos", 700}, {"setecentas", 700},
        {"oitocentos", 800}, {"oitocentas", 800}, {"novecentos", 900}, {"novecentas", 900},
        {"mil", 1000},
    };
    return lex;
}

NumeralLexicon english_numerals() {
    NumeralLexicon lex;
    lex.language = "en";
    lex.connectives = {"and"};
    lex.values = {
        {"zero", 0},    {"one", 1},      {"two", 2},       {"three", 3},    {"four", 4},
        {"five", 5},    {"six", 6},      {"seven", 7},     {"eight", 8},    {"nine", 9},
        {"ten", 10},    {"eleven", 11},  {"twelve", 12},   {"thirteen", 13},{"fourteen", 14},
        {"fifteen", 15},{"sixteen", 16}, {"seventeen", 17},{"eighteen", 18},{"nineteen", 19},
        {"twenty", 20}, {"thirty", 30},  {"forty", 40},    {"fifty", 50},   {"sixty", 60},
        {"seventy", 70},{"eighty", 80},  {"ninety", 90},   {"hundred", 100},{"thousand", 1000},
    };
    return lex;
}

std::string collapse_repetitions(const std::string& text, int max_ngram, int min_repeats) {
    if (max_ngram < 1 || min_repeats < 2)
        throw PipelineError("collapse_repetitions: require max_ngram >= 1, min_repeats >= 2");
    std::vector<std::string> tokens = split_ws(text);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int n = max_ngram; n >= 1; --n) {
            std::size_t i = 0;
            while (i + std::size_t(n) <= tokens.size()) {
                int repeats = 1;
                std::size_t j = i + std::size_t(n);
                while (j + std::size_t(n) <= tokens.size() &&
                       std::equal(tokens.begin() + long(i), tokens.begin() + long(i + std::size_t(n)),
                                  tokens.begin() + long(j))) {
                    ++repeats;
                    j += std::size_t(n);
                }
                if (repeats >= min_repeats) {
                    tokens.erase(tokens.begin() + long(i + std::size_t(n)), tokens.begin() + long(j));
                    changed = true;
                    i += std::size_t(n);
                } else {
                    ++i;
                }
            }
        }
    }
    return join(tokens, " ");
}

std::string normalize_numbers(const std::string& text, const NumeralLexicon& lexicon) {
    std::vector<std::string> tokens = split_ws(text);
    std::vector<TokenParts> parts;
    parts.reserve(tokens.size());
    for (const auto& t : tokens) parts.push_back(split_token(t));

    auto is_numeral = [&](std::size_t i) { return lexicon.values.count(parts[i].core) > 0; };
    auto is_connective = [&](std::size_t i) { return lexicon.connectives.count(parts[i].core) > 0; };

    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < tokens.size()) {
        if (!is_numeral(i)) {
            out.push_back(tokens[i]);
            ++i;
            continue;
        }
        // grow a maximal run: numeral words, connectives only between numerals;
        // trailing punctuation ends the run, leading punctuation starts one
        std::size_t end = i;         // exclusive, last accepted numeral + 1
        std::size_t last_numeral = i;
        std::size_t j = i;
        while (j < tokens.size()) {
            if (j > i && !parts[j].prefix.empty()) break;
            if (is_numeral(j)) {
                last_numeral = j;
                end = j + 1;
                if (!parts[j].suffix.empty()) break;
                ++j;
            } else if (is_connective(j) && j > i && parts[j].suffix.empty() &&
                       j + 1 < tokens.size() && is_numeral(j + 1)) {
                ++j;
            } else {
                break;
            }
        }
        (void)last_numeral;
        std::vector<std::string> words;
        for (std::size_t t = i; t < end; ++t)
            if (is_numeral(t)) words.push_back(parts[t].core);
        auto value = evaluate_run(words, lexicon);
        if (value) {
            out.push_back(parts[i].prefix + std::to_string(*value) + parts[end - 1].suffix);
        } else {
            for (std::size_t t = i; t < end; ++t) out.push_back(tokens[t]);
        }
        i = end;
    }
    return join(out, " ");
}

std::string remove_fillers(const std::string& text, const std::set<std::string>& fillers) {
    std::vector<std::string> tokens = split_ws(text);
    std::vector<std::string> kept;
    for (const auto& t : tokens)
        if (!fillers.count(strip_punct_lower(t))) kept.push_back(t);
    return join(kept, " ");
}

const std::set<std::string>& default_fillers_pt() {
    static const std::set<std::string> fillers = {
        "é", "eh", "hum", "uhum", "aham", "né", "tipo", "assim", "então", "ah", "ahn", "uh",
    };
    return fillers;
}

const std::set<std::string>& default_fillers_en() {
    static const std::set<std::string> fillers = {
        "uh", "um", "erm", "hmm", "like", "uhm", "mmm", "huh",
    };
    return fillers;
}

bool is_hallucination(const std::string& text, double repetition_ratio_max, int min_tokens) {
    if (repetition_ratio_max <= 0 || repetition_ratio_max > 1 || min_tokens < 1)
        throw PipelineError("is_hallucination: thresholds out of range");
    std::vector<std::string> tokens = split_ws(text);
    std::set<std::string> distinct;
    int total = 0;
    for (const auto& t : tokens) {
        std::string w = strip_punct_lower(t);
        if (w.empty()) continue;
        distinct.insert(w);
        ++total;
    }
    if (total < min_tokens) return false;
    return double(distinct.size()) / double(total) < repetition_ratio_max;
}

std::vector<TranscriptSegment> restore_sentences(const std::vector<TranscriptSegment>& segments,
                                                 double pause_gap_s) {
    std::vector<TranscriptSegment> out = segments;
    for (std::size_t i = 0; i < out.size(); ++i) {
        bool terminal_here;
        if (i + 1 == out.size()) {
            terminal_here = true;
        } else if (out[i + 1].speaker != out[i].speaker) {
            terminal_here = true;
        } else {
            terminal_here = (out[i + 1].start_s - out[i].end_s) > pause_gap_s;
        }
        if (terminal_here && !ends_with_terminal(out[i].text)) out[i].text += ".";
    }
    bool expect_capital = true;
    for (auto& seg : out) capitalize_sentences(seg.text, expect_capital);
    return out;
}

CallTranscript clean_transcript(const CallTranscript& transcript, const CleanOptions& options,
                                CleaningReport* report) {
    static const NumeralLexicon pt_lexicon = portuguese_numerals();
    const NumeralLexicon& lexicon = options.lexicon ? *options.lexicon : pt_lexicon;

    CallTranscript out;
    out.call_id = transcript.call_id;
    CleaningReport local_report;
    for (std::size_t i = 0; i < transcript.segments.size(); ++i) {
        const auto& seg = transcript.segments[i];
        SegmentCleaning rec;
        rec.segment_ref = i;
        if (is_hallucination(seg.text, options.repetition_ratio_max, options.min_tokens)) {
            rec.dropped = true;
            rec.drop_reason = DropReason::hallucination;
            rec.operators_applied.push_back("hallucination_filter");
            local_report.segments.push_back(std::move(rec));
            continue;
        }
        TranscriptSegment cleaned = seg;
        cleaned.text = collapse_repetitions(cleaned.text, options.max_ngram, options.min_repeats);
        rec.operators_applied.push_back("collapse_repetitions");
        cleaned.text = remove_fillers(cleaned.text, *options.fillers);
        rec.operators_applied.push_back("remove_fillers");
        cleaned.text = normalize_numbers(cleaned.text, lexicon);
        rec.operators_applied.push_back("normalize_numbers");
        if (trim(cleaned.text).empty()) {
            rec.dropped = true;
            rec.drop_reason = DropReason::empty_after_clean;
            local_report.segments.push_back(std::move(rec));
            continue;
        }
        out.segments.push_back(std::move(cleaned));
        local_report.segments.push_back(std::move(rec));
    }
    out.segments = restore_sentences(out.segments, options.pause_gap_s);
    if (report) *report = std::move(local_report);
    return out;
}

}  // namespace c2i
