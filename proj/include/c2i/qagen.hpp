#pragma once

#include <optional>
#include <string>
#include <vector>

#include "c2i/llm.hpp"
#include "c2i/records.hpp"
#include "c2i/transcript.hpp"
#include "c2i/vecstore.hpp"

namespace c2i {

enum class DemandValidity { valid, invalid, unchecked };

const char* to_string(DemandValidity v);

struct Demand {
    std::string demand_id;
    std::string call_id;
    std::string raw_utterances;
    std::string rewritten;
    DemandValidity validity = DemandValidity::unchecked;
    std::string invalid_reason;
    std::optional<EmbeddingVector> embedding;
};

struct CandidateRef {
    std::string entry_id;
    std::string call_id;
    double score = 0.0;
};

struct QaPair {
    std::string demand_id;
    std::string question;
    std::string answer;
    std::vector<CandidateRef> candidate_refs;  // length <= top_n, scores non-increasing
    DemandValidity validity = DemandValidity::unchecked;
};

// Customer segments from call start through the segment immediately preceding
// the first substantive agent turn (> threshold tokens); all customer segments
// when no such agent turn exists. Throws when the call has no customer speech.
std::string extract_demand_utterances(const CallTranscript& transcript,
                                      int substantive_tokens = 8);

// Agent segments from the first substantive agent turn onward; empty result
// means the call contributes a demand but no response entry.
std::string extract_response_utterances(const CallTranscript& transcript,
                                        int substantive_tokens = 8);

struct PairAudit {
    std::string demand_id;
    std::vector<CandidateRef> hits;
    std::vector<std::size_t> refined_lengths;
    bool skipped = false;
    std::string skip_reason;
};

// Per demand: search top-n agent entries, refine each candidate against the
// demand, synthesize one answer. Gateway failures skip the pair and the run
// continues; invalid demands are processed but tagged.
std::vector<QaPair> build_pairs(const std::vector<Demand>& demands, const VectorIndex& store,
                                LlmGateway& gateway, int n,
                                std::vector<PairAudit>* audit = nullptr);

struct InstructTemplate {
    std::string template_id;
    std::string instruction;
};

const std::vector<InstructTemplate>& default_instruct_templates();
std::vector<InstructTemplate> load_instruct_templates(const std::string& path);

// Instruction chosen by seeded rotation: template index = (seed + ordinal) % size.
InstructRecord format_instruct(const QaPair& pair, const std::string& source_call_id,
                               const std::vector<InstructTemplate>& templates, std::uint64_t seed,
                               std::size_t ordinal);

}  // namespace c2i
