#include "c2i/vecstore.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace c2i {
namespace {

constexpr char kMagic[8] = {'C', '2', 'I', 'V', 'I', 'D', 'X', '1'};
constexpr std::uint32_t kVersion = 1;

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    double dot = a.cast<double>().dot(b.cast<double>());
    double na = std::sqrt(a.cast<double>().squaredNorm());
    double nb = std::sqrt(b.cast<double>().squaredNorm());
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (na * nb);
}

void put_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), 4);
}

void put_string(std::ostream& out, const std::string& s) {
    put_u32(out, std::uint32_t(s.size()));
    out.write(s.data(), std::streamsize(s.size()));
}

std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    if (!in) throw PipelineError("vector index: truncated file");
    return v;
}

std::string get_string(std::istream& in) {
    std::uint32_t n = get_u32(in);
    std::string s(n, '\0');
    in.read(s.data(), std::streamsize(n));
    if (!in) throw PipelineError("vector index: truncated file");
    return s;
}

}  // namespace

void VectorIndex::insert(VectorEntry entry) {
    if (int(entry.embedding.size()) != dim_)
        throw PipelineError("vector index: dimension mismatch for entry " + entry.entry_id +
                            " (got " + std::to_string(entry.embedding.size()) + ", index dim " +
                            std::to_string(dim_) + ")");
    if (by_id_.count(entry.entry_id))
        throw PipelineError("vector index: duplicate entry_id " + entry.entry_id);
    by_id_[entry.entry_id] = entries_.size();
    entries_.push_back(std::move(entry));
}

std::vector<SearchHit> VectorIndex::search(const EmbeddingVector& query, int k,
                                           std::optional<Speaker> persona_filter,
                                           const std::string& exclude_call_id) const {
    if (int(query.size()) != dim_)
        throw PipelineError("vector index: query dimension mismatch (got " +
                            std::to_string(query.size()) + ", index dim " + std::to_string(dim_) +
                            ")");
    if (k < 1) throw PipelineError("vector index: k must be >= 1");

    std::vector<SearchHit> hits;
    for (const auto& e : entries_) {
        if (persona_filter && e.persona != *persona_filter) continue;
        if (!exclude_call_id.empty() && e.call_id == exclude_call_id) continue;
        hits.push_back({e.entry_id, cosine(query, e.embedding), 0});
    }
    std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.entry_id < b.entry_id;
    });
    if (int(hits.size()) > k) hits.resize(std::size_t(k));
    for (std::size_t i = 0; i < hits.size(); ++i) hits[i].rank = int(i + 1);
    return hits;
}

const VectorEntry& VectorIndex::entry(const std::string& entry_id) const {
    auto it = by_id_.find(entry_id);
    if (it == by_id_.end()) throw PipelineError("vector index: unknown entry_id " + entry_id);
    return entries_[it->second];
}

void VectorIndex::persist(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PipelineError("vector index: cannot write " + path);
    out.write(kMagic, 8);
    put_u32(out, kVersion);
    put_u32(out, std::uint32_t(dim_));
    put_u32(out, std::uint32_t(entries_.size()));
    for (const auto& e : entries_) {
        put_string(out, e.entry_id);
        put_string(out, e.text);
        put_string(out, to_string(e.persona));
        put_string(out, e.call_id);
        out.write(reinterpret_cast<const char*>(e.embedding.data()),
                  std::streamsize(std::size_t(dim_) * sizeof(float)));
    }
    if (!out) throw PipelineError("vector index: short write to " + path);
}

VectorIndex VectorIndex::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PipelineError("vector index: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw PipelineError("vector index: bad magic in " + path);
    std::uint32_t version = get_u32(in);
    if (version != kVersion)
        throw PipelineError("vector index: unsupported version " + std::to_string(version));
    int dim = int(get_u32(in));
    std::uint32_t count = get_u32(in);
    VectorIndex index(dim);
    for (std::uint32_t i = 0; i < count; ++i) {
        VectorEntry e;
        e.entry_id = get_string(in);
        e.text = get_string(in);
        e.persona = speaker_from_string(get_string(in));
        e.call_id = get_string(in);
        e.embedding.resize(dim);
        in.read(reinterpret_cast<char*>(e.embedding.data()),
                std::streamsize(std::size_t(dim) * sizeof(float)));
        if (!in) throw PipelineError("vector index: truncated entry in " + path);
        index.insert(std::move(e));
    }
    return index;
}

}  // namespace c2i
