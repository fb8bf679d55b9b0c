#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "c2i/asr.hpp"
#include "c2i/config.hpp"
#include "c2i/llm.hpp"
#include "c2i/manifest.hpp"
#include "c2i/validate.hpp"

namespace c2i {

// Nonzero validation gates get their own types so the CLI can map exit codes.
class LeakGateError : public PipelineError {
public:
    explicit LeakGateError(std::string msg) : PipelineError(std::move(msg)) {}
};

class CoherenceGateError : public PipelineError {
public:
    explicit CoherenceGateError(std::string msg) : PipelineError(std::move(msg)) {}
};

struct StageResult {
    std::string name;
    std::size_t items = 0;
    bool skipped = false;
    double duration_ms = 0.0;
};

struct RunReport {
    std::vector<StageResult> stages;
    std::optional<ValidationReport> validation;
};

// ingest -> ivr -> asr -> clean -> anonymize -> extract -> embed -> index ->
// generate -> validate
const std::vector<std::string>& canonical_stages();

class Pipeline {
public:
    explicit Pipeline(PipelineConfig config, bool verbose = false);

    // Test hooks: replace the backends ahead of a run.
    void set_asr_backend(std::shared_ptr<AsrBackend> backend) { asr_ = std::move(backend); }
    void set_chat_backend(std::shared_ptr<ChatBackend> backend) { chat_ = std::move(backend); }
    void set_embed_backend(std::shared_ptr<EmbedBackend> backend) { embedder_ = std::move(backend); }

    // Stages must be listed in canonical order; each stage's upstream must be
    // in the list or already complete in the manifest.
    RunReport run(const std::vector<std::string>& stages, bool resume);
    RunReport run_all(bool resume) { return run(canonical_stages(), resume); }

    const PipelineConfig& config() const { return config_; }

private:
    struct StageIo;
    std::string workspace_path(const std::string& stage, const std::string& file = "") const;
    std::string stage_input_digest(const std::string& stage, const WorkspaceManifest& manifest) const;
    std::size_t run_stage(const std::string& stage, WorkspaceManifest& manifest,
                          std::vector<std::string>& outputs, RunReport& report);

    std::size_t stage_ingest(std::vector<std::string>& outputs);
    std::size_t stage_ivr(std::vector<std::string>& outputs);
    std::size_t stage_asr(std::vector<std::string>& outputs);
    std::size_t stage_clean(std::vector<std::string>& outputs);
    std::size_t stage_anonymize(std::vector<std::string>& outputs);
    std::size_t stage_extract(std::vector<std::string>& outputs);
    std::size_t stage_embed(std::vector<std::string>& outputs);
    std::size_t stage_index(std::vector<std::string>& outputs);
    std::size_t stage_generate(std::vector<std::string>& outputs);
    std::size_t stage_validate(std::vector<std::string>& outputs, RunReport& report);

    std::vector<std::string> list_calls(const std::string& stage_dir, const std::string& ext) const;
    LlmGateway make_gateway();

    PipelineConfig config_;
    bool verbose_ = false;
    std::shared_ptr<AsrBackend> asr_;
    std::shared_ptr<ChatBackend> chat_;
    std::shared_ptr<EmbedBackend> embedder_;
};

}  // namespace c2i
