#pragma once

#include <string>

#include "c2i/common.hpp"

namespace c2i {

enum class BackendKind { mock, external_command, http };

BackendKind backend_kind_from_string(std::string_view s, const std::string& key);
const char* to_string(BackendKind k);

struct IvrConfig {
    double window_s = 1.0;
    double hop_s = 0.5;
    int k = 2;
    int consec_m = 5;
    int head_windows = 10;
    std::uint64_t seed = 42;
};

struct PipelineConfig {
    std::string input_dir;
    std::string workspace_dir;
    int sample_rate_hz = 16000;
    IvrConfig ivr;

    BackendKind asr_backend = BackendKind::mock;
    std::string asr_endpoint;
    std::string asr_command;

    BackendKind llm_backend = BackendKind::mock;
    std::string llm_endpoint;

    BackendKind embed_backend = BackendKind::mock;
    std::string embed_endpoint;
    int embed_dim = 1536;

    int top_n = 3;
    double redundancy_threshold = 0.95;
    std::string pii_rules;          // optional path; built-in rules when empty
    std::string instruct_templates; // optional path; built-in set when empty
    int max_concurrent_calls = 4;
    int max_concurrent_requests = 4;

    // Serialized form of the fields affecting a stage; feeds the input digest.
    std::string digest_subsection(const std::string& stage) const;
};

// Flat text format with [sections]; unknown keys are rejected by name, every
// invariant violation names the offending key.
PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config(std::string_view contents, const std::string& origin);

}  // namespace c2i
