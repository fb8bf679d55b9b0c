#include "c2i/validate.hpp"

#include <json.hpp>

#include <cmath>
#include <numeric>

namespace c2i {

using nlohmann::json;

std::vector<CoherenceResult> check_coherence(const std::vector<InstructRecord>& records,
                                             int min_output_tokens) {
    std::vector<CoherenceResult> out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        CoherenceResult res;
        res.record_index = i;
        if (trim(r.instruction).empty() || trim(r.input).empty() || trim(r.output).empty())
            res.reasons.push_back("empty_field");
        if (int(split_ws(r.output).size()) < min_output_tokens) res.reasons.push_back("too_short");
        if (trim(r.input) == trim(r.output)) res.reasons.push_back("echo");
        res.pass = res.reasons.empty();
        out.push_back(std::move(res));
    }
    return out;
}

std::vector<RedundantPair> check_redundancy(const std::vector<InstructRecord>& records,
                                            const std::vector<EmbeddingVector>& question_embeddings,
                                            double threshold) {
    if (records.size() != question_embeddings.size())
        throw PipelineError("check_redundancy: embeddings missing for some questions");
    std::vector<RedundantPair> flagged;
    for (std::size_t i = 0; i < records.size(); ++i) {
        for (std::size_t j = i + 1; j < records.size(); ++j) {
            const auto& a = question_embeddings[i];
            const auto& b = question_embeddings[j];
            double na = std::sqrt(a.cast<double>().squaredNorm());
            double nb = std::sqrt(b.cast<double>().squaredNorm());
            double sim = (na == 0.0 || nb == 0.0)
                             ? 0.0
                             : a.cast<double>().dot(b.cast<double>()) / (na * nb);
            if (sim > threshold) flagged.push_back({i, j, sim});
        }
    }
    return flagged;
}

void check_accounting(const ValidationReport& report) {
    std::size_t skipped = std::accumulate(
        report.skipped_with_reason.begin(), report.skipped_with_reason.end(), std::size_t(0),
        [](std::size_t acc, const auto& kv) { return acc + kv.second; });
    if (report.pairs_out + skipped != report.demands_in)
        throw PipelineError("validation accounting does not close: pairs_out " +
                            std::to_string(report.pairs_out) + " + skipped " +
                            std::to_string(skipped) + " != demands_in " +
                            std::to_string(report.demands_in));
}

std::vector<InstructRecord> review_sample(const std::vector<InstructRecord>& records,
                                          std::uint64_t seed, std::size_t sample_size) {
    std::vector<std::size_t> indices(records.size());
    std::iota(indices.begin(), indices.end(), 0);
    std::uint64_t state = seed;
    for (std::size_t i = indices.size(); i > 1; --i)
        std::swap(indices[i - 1], indices[splitmix64(state) % i]);
    std::size_t n = std::min(sample_size, records.size());
    std::vector<InstructRecord> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(records[indices[i]]);
    return out;
}

std::string report_to_json(const ValidationReport& report) {
    json flagged = json::array();
    for (const auto& p : report.flagged_redundant)
        flagged.push_back({{"first", p.first}, {"second", p.second}, {"similarity", p.similarity}});
    json skipped = json::object();
    for (const auto& [reason, count] : report.skipped_with_reason) skipped[reason] = count;
    double invalid_ratio =
        report.demands_in > 0 ? double(report.invalid_demand_count) / double(report.demands_in) : 0.0;
    return json{{"total_records", report.total_records},
                {"coherent", report.coherent},
                {"flagged_redundant", std::move(flagged)},
                {"completeness",
                 {{"demands_in", report.demands_in},
                  {"pairs_out", report.pairs_out},
                  {"skipped_with_reason", std::move(skipped)}}},
                {"leak_violations", report.leak_violations},
                {"invalid_demand_count", report.invalid_demand_count},
                {"invalid_demand_ratio", invalid_ratio},
                {"sample_path", report.sample_path}}
        .dump(2);
}

}  // namespace c2i
