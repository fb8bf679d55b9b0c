#pragma once

#include <map>
#include <regex>
#include <string>
#include <vector>

#include "c2i/common.hpp"
#include "c2i/records.hpp"

namespace c2i {

enum class PiiCategory { NAME, ACCOUNT_ID, PHONE, EMAIL, DOC_ID, ADDRESS };

const char* to_string(PiiCategory c);
PiiCategory pii_category_from_string(std::string_view s);
std::string placeholder_for(PiiCategory c);

struct PiiRule {
    PiiCategory category = PiiCategory::NAME;
    bool is_dictionary = false;
    std::string payload;              // regex source or comma-separated dictionary words
    int priority = 0;
    // compiled state
    std::regex pattern;
    int capture_group = 0;            // span comes from this group (0 = whole match)
    std::vector<std::string> dictionary;
};

struct PiiSpan {
    std::size_t start = 0;
    std::size_t end = 0;              // exclusive
    PiiCategory category = PiiCategory::NAME;
    std::string original_digest;      // one-way hash; the matched text is never stored
};

// Rule file: `category <TAB> kind(pattern|dict) <TAB> payload <TAB> priority`,
// '#' comments. Invalid patterns are reported here at load time.
std::vector<PiiRule> load_pii_rules(const std::string& path);
std::vector<PiiRule> parse_pii_rules(std::string_view contents, const std::string& origin);
const std::vector<PiiRule>& default_pii_rules();

// All candidate matches, overlaps resolved longest-match-first, then higher
// priority, then leftmost. Result is sorted and non-overlapping.
std::vector<PiiSpan> detect_pii(const std::string& text, const std::vector<PiiRule>& rules);

struct RedactionReport {
    std::map<std::string, int> category_counts;
};

std::string redact(const std::string& text, const std::vector<PiiSpan>& spans,
                   RedactionReport* report = nullptr);

struct LeakViolation {
    std::size_t record_index = 0;
    std::string field;               // instruction | input | output
    PiiCategory category = PiiCategory::NAME;
};

std::vector<LeakViolation> leak_scan(const std::vector<InstructRecord>& records,
                                     const std::vector<PiiRule>& rules);

}  // namespace c2i
