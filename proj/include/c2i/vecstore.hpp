#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "c2i/llm.hpp"  // EmbeddingVector
#include "c2i/transcript.hpp"  // Speaker

namespace c2i {

struct VectorEntry {
    std::string entry_id;
    std::string text;
    Speaker persona = Speaker::agent;
    std::string call_id;
    EmbeddingVector embedding;
};

struct SearchHit {
    std::string entry_id;
    double score = 0.0;  // cosine similarity
    int rank = 0;        // 1-based
};

// Exact brute-force cosine top-k index. Ties break by ascending entry_id;
// zero-norm vectors score 0 by convention.
class VectorIndex {
public:
    explicit VectorIndex(int dim) : dim_(dim) {
        if (dim < 1) throw PipelineError("vector index: dim must be >= 1");
    }

    void insert(VectorEntry entry);
    std::vector<SearchHit> search(const EmbeddingVector& query, int k,
                                  std::optional<Speaker> persona_filter = std::nullopt,
                                  const std::string& exclude_call_id = "") const;
    std::size_t count() const { return entries_.size(); }
    int dim() const { return dim_; }
    const VectorEntry& entry(const std::string& entry_id) const;

    void persist(const std::string& path) const;
    static VectorIndex load(const std::string& path);

private:
    int dim_;
    std::vector<VectorEntry> entries_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

}  // namespace c2i
