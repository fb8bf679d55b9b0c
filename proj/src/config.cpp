#include "c2i/config.hpp"

#include <filesystem>
#include <map>
#include <set>

namespace c2i {

namespace fs = std::filesystem;

BackendKind backend_kind_from_string(std::string_view s, const std::string& key) {
    if (s == "mock") return BackendKind::mock;
    if (s == "external_command") return BackendKind::external_command;
    if (s == "http") return BackendKind::http;
    throw ConfigError(key + ": unknown backend kind '" + std::string(s) +
                      "' (expected mock, external_command or http)");
}

const char* to_string(BackendKind k) {
    switch (k) {
        case BackendKind::mock: return "mock";
        case BackendKind::external_command: return "external_command";
        case BackendKind::http: return "http";
    }
    return "?";
}

namespace {

long parse_int(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        long v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
}

double parse_double(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
}

}  // namespace

PipelineConfig parse_config(std::string_view contents, const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::string section;
    std::size_t line_no = 0;
    for (const auto& raw : split(std::string(contents), '\n')) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        std::string full_key = section.empty() ? key : section + "." + key;
        if (kv.count(full_key))
            throw ConfigError(full_key + ": duplicate key");
        kv[full_key] = value;
    }

    PipelineConfig cfg;
    std::set<std::string> seen;
    auto take = [&](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        seen.insert(key);
        return &it->second;
    };

    if (auto* v = take("input_dir")) cfg.input_dir = *v;
    if (auto* v = take("workspace_dir")) cfg.workspace_dir = *v;
    if (auto* v = take("sample_rate_hz")) cfg.sample_rate_hz = int(parse_int(*v, "sample_rate_hz"));
    if (auto* v = take("top_n")) cfg.top_n = int(parse_int(*v, "top_n"));
    if (auto* v = take("redundancy_threshold"))
        cfg.redundancy_threshold = parse_double(*v, "redundancy_threshold");
    if (auto* v = take("pii_rules")) cfg.pii_rules = *v;
    if (auto* v = take("instruct_templates")) cfg.instruct_templates = *v;
    if (auto* v = take("max_concurrent_calls"))
        cfg.max_concurrent_calls = int(parse_int(*v, "max_concurrent_calls"));
    if (auto* v = take("max_concurrent_requests"))
        cfg.max_concurrent_requests = int(parse_int(*v, "max_concurrent_requests"));

    if (auto* v = take("ivr.window_s")) cfg.ivr.window_s = parse_double(*v, "ivr.window_s");
    if (auto* v = take("ivr.hop_s")) cfg.ivr.hop_s = parse_double(*v, "ivr.hop_s");
    if (auto* v = take("ivr.k")) cfg.ivr.k = int(parse_int(*v, "ivr.k"));
    if (auto* v = take("ivr.consec_m")) cfg.ivr.consec_m = int(parse_int(*v, "ivr.consec_m"));
    if (auto* v = take("ivr.head_windows"))
        cfg.ivr.head_windows = int(parse_int(*v, "ivr.head_windows"));
    if (auto* v = take("ivr.seed")) cfg.ivr.seed = std::uint64_t(parse_int(*v, "ivr.seed"));

    if (auto* v = take("asr.backend")) cfg.asr_backend = backend_kind_from_string(*v, "asr.backend");
    if (auto* v = take("asr.endpoint")) cfg.asr_endpoint = *v;
    if (auto* v = take("asr.command")) cfg.asr_command = *v;

    if (auto* v = take("llm.backend")) {
        if (*v == "external_command")
            throw ConfigError("llm.backend: external_command is not supported for llm");
        cfg.llm_backend = backend_kind_from_string(*v, "llm.backend");
    }
    if (auto* v = take("llm.endpoint")) cfg.llm_endpoint = *v;

    if (auto* v = take("embed.backend")) {
        if (*v == "external_command")
            throw ConfigError("embed.backend: external_command is not supported for embed");
        cfg.embed_backend = backend_kind_from_string(*v, "embed.backend");
    }
    if (auto* v = take("embed.endpoint")) cfg.embed_endpoint = *v;
    if (auto* v = take("embed.dim")) cfg.embed_dim = int(parse_int(*v, "embed.dim"));

    std::vector<std::string> unknown;
    for (const auto& [key, value] : kv)
        if (!seen.count(key)) unknown.push_back(key);
    if (!unknown.empty())
        throw ConfigError("unknown config keys: " + join(unknown, ", "));

    // invariants, each naming the offending key
    if (cfg.input_dir.empty()) throw ConfigError("input_dir: required");
    if (cfg.workspace_dir.empty()) throw ConfigError("workspace_dir: required");
    if (cfg.sample_rate_hz <= 0) throw ConfigError("sample_rate_hz: must be positive");
    if (cfg.ivr.window_s <= 0) throw ConfigError("ivr.window_s: must be positive");
    if (cfg.ivr.hop_s <= 0 || cfg.ivr.hop_s > cfg.ivr.window_s)
        throw ConfigError("ivr.hop_s: require 0 < hop_s <= window_s");
    if (cfg.ivr.k < 2) throw ConfigError("ivr.k: must be >= 2");
    if (cfg.ivr.consec_m < 1) throw ConfigError("ivr.consec_m: must be >= 1");
    if (cfg.ivr.head_windows < 1) throw ConfigError("ivr.head_windows: must be >= 1");
    if (cfg.top_n < 1) throw ConfigError("top_n: must be >= 1");
    if (cfg.embed_dim < 1) throw ConfigError("embed.dim: must be >= 1");
    if (cfg.redundancy_threshold < 0 || cfg.redundancy_threshold > 1)
        throw ConfigError("redundancy_threshold: must be in [0, 1]");
    if (cfg.max_concurrent_calls < 1) throw ConfigError("max_concurrent_calls: must be >= 1");
    if (cfg.max_concurrent_requests < 1) throw ConfigError("max_concurrent_requests: must be >= 1");
    if (cfg.asr_backend == BackendKind::external_command && cfg.asr_command.empty())
        throw ConfigError("asr.command: required when asr.backend = external_command");
    if (cfg.asr_backend == BackendKind::http && cfg.asr_endpoint.empty())
        throw ConfigError("asr.endpoint: required when asr.backend = http");
    if (cfg.llm_backend == BackendKind::http && cfg.llm_endpoint.empty())
        throw ConfigError("llm.endpoint: required when llm.backend = http");
    if (cfg.embed_backend == BackendKind::http && cfg.embed_endpoint.empty())
        throw ConfigError("embed.endpoint: required when embed.backend = http");

    if (!fs::is_directory(cfg.input_dir))
        throw ConfigError("input_dir: does not resolve to a directory: " + cfg.input_dir);
    if (!cfg.pii_rules.empty() && !fs::is_regular_file(cfg.pii_rules))
        throw ConfigError("pii_rules: file not found: " + cfg.pii_rules);
    if (!cfg.instruct_templates.empty() && !fs::is_regular_file(cfg.instruct_templates))
        throw ConfigError("instruct_templates: file not found: " + cfg.instruct_templates);
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    if (!fs::is_regular_file(path)) throw ConfigError("config file not found: " + path);
    return parse_config(read_file(path), path);
}

std::string PipelineConfig::digest_subsection(const std::string& stage) const {
    std::string s = "stage=" + stage + ";rate=" + std::to_string(sample_rate_hz);
    if (stage == "ivr")
        s += ";window=" + std::to_string(ivr.window_s) + ";hop=" + std::to_string(ivr.hop_s) +
             ";k=" + std::to_string(ivr.k) + ";m=" + std::to_string(ivr.consec_m) +
             ";head=" + std::to_string(ivr.head_windows) + ";seed=" + std::to_string(ivr.seed);
    if (stage == "asr") s += std::string(";backend=") + to_string(asr_backend) + ";" + asr_command + asr_endpoint;
    if (stage == "anonymize") s += ";rules=" + pii_rules;
    if (stage == "extract" || stage == "generate")
        s += std::string(";llm=") + to_string(llm_backend) + llm_endpoint;
    if (stage == "embed" || stage == "generate" || stage == "validate")
        s += std::string(";embed=") + to_string(embed_backend) + embed_endpoint + ";dim=" +
             std::to_string(embed_dim);
    if (stage == "generate")
        s += ";top_n=" + std::to_string(top_n) + ";templates=" + instruct_templates;
    if (stage == "validate") s += ";redundancy=" + std::to_string(redundancy_threshold);
    return s;
}

}  // namespace c2i
