#include "c2i/qagen.hpp"

#include <algorithm>

namespace c2i {

const char* to_string(DemandValidity v) {
    switch (v) {
        case DemandValidity::valid: return "valid";
        case DemandValidity::invalid: return "invalid";
        case DemandValidity::unchecked: return "unchecked";
    }
    return "?";
}

namespace {

int token_count(const std::string& text) { return int(split_ws(text).size()); }

// Index of the first agent segment with more than `substantive_tokens` tokens,
// or -1 when none exists.
long first_substantive_agent(const CallTranscript& t, int substantive_tokens) {
    for (std::size_t i = 0; i < t.segments.size(); ++i) {
        const auto& seg = t.segments[i];
        if (seg.speaker == Speaker::agent && token_count(seg.text) > substantive_tokens)
            return long(i);
    }
    return -1;
}

}  // namespace

std::string extract_demand_utterances(const CallTranscript& transcript, int substantive_tokens) {
    long cutoff = first_substantive_agent(transcript, substantive_tokens);
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < transcript.segments.size(); ++i) {
        if (cutoff >= 0 && long(i) >= cutoff) break;
        const auto& seg = transcript.segments[i];
        if (seg.speaker == Speaker::customer) parts.push_back(seg.text);
    }
    if (parts.empty() && cutoff >= 0) {
        // no customer speech before the first substantive agent turn: fall back
        // to any customer speech at all
        for (const auto& seg : transcript.segments)
            if (seg.speaker == Speaker::customer) parts.push_back(seg.text);
    }
    if (parts.empty())
        throw PipelineError("call " + transcript.call_id + " has no customer speech; excluded");
    return join(parts, " ");
}

std::string extract_response_utterances(const CallTranscript& transcript, int substantive_tokens) {
    long start = first_substantive_agent(transcript, substantive_tokens);
    std::vector<std::string> parts;
    if (start >= 0) {
        for (std::size_t i = std::size_t(start); i < transcript.segments.size(); ++i)
            if (transcript.segments[i].speaker == Speaker::agent)
                parts.push_back(transcript.segments[i].text);
    }
    return join(parts, " ");
}

std::vector<QaPair> build_pairs(const std::vector<Demand>& demands, const VectorIndex& store,
                                LlmGateway& gateway, int n, std::vector<PairAudit>* audit) {
    if (store.count() == 0) throw PipelineError("build_pairs: vector store is empty");
    PromptTemplate refine_tmpl = builtin_prompt(ChatTask::refine_response, "v2");
    PromptTemplate synth_tmpl = builtin_prompt(ChatTask::synthesize_answer, "v2");

    std::vector<QaPair> pairs;
    for (const auto& demand : demands) {
        PairAudit rec;
        rec.demand_id = demand.demand_id;
        if (!demand.embedding) throw PipelineError("build_pairs: demand " + demand.demand_id +
                                                   " has no embedding");
        try {
            auto hits = store.search(*demand.embedding, n, Speaker::agent);
            if (hits.empty()) throw PipelineError("no agent candidates for " + demand.demand_id);
            QaPair pair;
            pair.demand_id = demand.demand_id;
            pair.question = demand.rewritten;
            pair.validity = demand.validity;
            std::vector<std::string> refined;
            for (const auto& hit : hits) {
                const VectorEntry& entry = store.entry(hit.entry_id);
                pair.candidate_refs.push_back({entry.entry_id, entry.call_id, hit.score});
                rec.hits.push_back({entry.entry_id, entry.call_id, hit.score});
                std::string text = gateway.refine_response(entry.text, demand.rewritten, refine_tmpl);
                rec.refined_lengths.push_back(text.size());
                refined.push_back(std::move(text));
            }
            pair.answer = gateway.synthesize_answer(refined, demand.rewritten, synth_tmpl);
            pairs.push_back(std::move(pair));
        } catch (const std::exception& e) {
            rec.skipped = true;
            rec.skip_reason = e.what();
        }
        if (audit) audit->push_back(std::move(rec));
    }
    return pairs;
}

const std::vector<InstructTemplate>& default_instruct_templates() {
    static const std::vector<InstructTemplate> templates = {
        {"t0", "Based on the customer's query, what was the recommended solution?"},
        {"t1", "What did the customer ask?"},
        {"t2", "What was the agent's recommendation?"},
        {"t3", "Answer the customer's demand as a call-center agent would."},
        {"t4", "Given the customer request below, provide the resolution offered."},
    };
    return templates;
}

std::vector<InstructTemplate> load_instruct_templates(const std::string& path) {
    std::vector<InstructTemplate> out;
    std::size_t idx = 0;
    for (const auto& raw : split(read_file(path), '\n')) {
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        out.push_back({"t" + std::to_string(idx++), line});
    }
    if (out.empty()) throw ConfigError("instruct template file is empty: " + path);
    return out;
}

InstructRecord format_instruct(const QaPair& pair, const std::string& source_call_id,
                               const std::vector<InstructTemplate>& templates, std::uint64_t seed,
                               std::size_t ordinal) {
    if (templates.empty()) throw PipelineError("format_instruct: empty template set");
    const auto& tmpl = templates[(seed + ordinal) % templates.size()];
    InstructRecord r;
    r.instruction = tmpl.instruction;
    r.input = pair.question;
    r.output = pair.answer;
    r.meta.demand_id = pair.demand_id;
    r.meta.source_call_id = source_call_id;
    for (const auto& c : pair.candidate_refs) r.meta.candidate_call_ids.push_back(c.call_id);
    r.meta.template_id = tmpl.template_id;
    validate_record(r);
    return r;
}

}  // namespace c2i
