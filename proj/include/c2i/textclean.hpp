#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "c2i/transcript.hpp"

namespace c2i {

// Word -> value map covering units/tens/hundreds/thousands plus connectives.
// Composable range is 0..9999.
struct NumeralLexicon {
    std::string language;
    std::map<std::string, long> values;       // numeral word -> value
    std::set<std::string> connectives;        // e.g. "e" / "and"
};

NumeralLexicon portuguese_numerals();
NumeralLexicon english_numerals();

// Consecutive token-level n-gram repetitions (n <= max_ngram, >= min_repeats
// occurrences) reduced to one occurrence, longest-n first, leftmost first.
std::string collapse_repetitions(const std::string& text, int max_ngram = 3, int min_repeats = 2);

// Maximal runs of numeral words rewritten as digit strings. Digit-word runs
// ("two zero zero") concatenate positionally; compositional cardinals
// ("two hundred") are evaluated. Unparseable runs are left verbatim.
std::string normalize_numbers(const std::string& text, const NumeralLexicon& lexicon);

std::string remove_fillers(const std::string& text, const std::set<std::string>& fillers);

const std::set<std::string>& default_fillers_pt();
const std::set<std::string>& default_fillers_en();

// Drop decision for ASR hallucinations: token count >= min_tokens and
// distinct/total token ratio < repetition_ratio_max.
bool is_hallucination(const std::string& text, double repetition_ratio_max = 0.3,
                      int min_tokens = 5);

// Rule-based sentence restoration over sorted segments: terminal period when the
// speaker changes or the same-speaker gap exceeds pause_gap_s; sentence-initial
// capitalization. Existing punctuation is preserved.
std::vector<TranscriptSegment> restore_sentences(const std::vector<TranscriptSegment>& segments,
                                                 double pause_gap_s = 1.0);

enum class DropReason { hallucination, empty_after_clean };

struct SegmentCleaning {
    std::size_t segment_ref = 0;
    std::vector<std::string> operators_applied;
    bool dropped = false;
    std::optional<DropReason> drop_reason;
};

struct CleaningReport {
    std::vector<SegmentCleaning> segments;
};

struct CleanOptions {
    int max_ngram = 3;
    int min_repeats = 2;
    double repetition_ratio_max = 0.3;
    int min_tokens = 5;
    double pause_gap_s = 1.0;
    const std::set<std::string>* fillers = &default_fillers_pt();
    const NumeralLexicon* lexicon = nullptr;  // defaults to Portuguese
};

// Fixed operator order: hallucination filter -> repetition collapse ->
// filler removal -> number normalization -> sentence restoration.
CallTranscript clean_transcript(const CallTranscript& transcript, const CleanOptions& options,
                                CleaningReport* report = nullptr);

}  // namespace c2i
