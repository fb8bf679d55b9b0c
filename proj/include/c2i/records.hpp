#pragma once

#include <string>
#include <vector>

#include "c2i/common.hpp"

namespace c2i {

struct InstructMeta {
    std::string demand_id;
    std::string source_call_id;
    std::vector<std::string> candidate_call_ids;
    std::string template_id;
    std::string pipeline_version = kPipelineVersion;

    bool operator==(const InstructMeta&) const = default;
};

// One line of the final dataset. instruction/input/output must be non-empty.
struct InstructRecord {
    std::string instruction;
    std::string input;    // the demand
    std::string output;   // the synthesized answer
    InstructMeta meta;

    bool operator==(const InstructRecord&) const = default;
};

void validate_record(const InstructRecord& r);

// UTF-8 JSONL, keys exactly instruction/input/output/meta, one record per line.
std::string encode_instruct_jsonl(const std::vector<InstructRecord>& records);

struct JsonlDecodeError {
    std::size_t line_number = 0;  // 1-based
    std::string message;
};

struct JsonlDecodeResult {
    std::vector<InstructRecord> records;
    std::vector<JsonlDecodeError> errors;  // decode is all-or-nothing per line
};

JsonlDecodeResult decode_instruct_jsonl(std::string_view bytes);

}  // namespace c2i
