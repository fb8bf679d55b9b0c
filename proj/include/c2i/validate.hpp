#pragma once

#include <map>
#include <string>
#include <vector>

#include "c2i/llm.hpp"
#include "c2i/records.hpp"

namespace c2i {

struct CoherenceResult {
    std::size_t record_index = 0;
    bool pass = true;
    std::vector<std::string> reasons;  // empty_field | too_short | echo
};

std::vector<CoherenceResult> check_coherence(const std::vector<InstructRecord>& records,
                                             int min_output_tokens = 3);

struct RedundantPair {
    std::size_t first = 0;
    std::size_t second = 0;
    double similarity = 0.0;
};

// All unordered record pairs whose question embeddings exceed the cosine
// threshold; exact O(n^2) comparison.
std::vector<RedundantPair> check_redundancy(const std::vector<InstructRecord>& records,
                                            const std::vector<EmbeddingVector>& question_embeddings,
                                            double threshold);

struct ValidationReport {
    std::size_t total_records = 0;
    std::size_t coherent = 0;
    std::vector<RedundantPair> flagged_redundant;
    std::size_t demands_in = 0;
    std::size_t pairs_out = 0;
    std::map<std::string, std::size_t> skipped_with_reason;
    std::size_t leak_violations = 0;
    std::size_t invalid_demand_count = 0;
    std::string sample_path;
};

// Accounting must close: pairs_out + sum(skipped) = demands_in.
void check_accounting(const ValidationReport& report);

// Seeded random selection of min(sample_size, total) records for human review.
std::vector<InstructRecord> review_sample(const std::vector<InstructRecord>& records,
                                          std::uint64_t seed, std::size_t sample_size = 25);

std::string report_to_json(const ValidationReport& report);

}  // namespace c2i
