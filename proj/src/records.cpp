#include "c2i/records.hpp"

#include <json.hpp>

namespace c2i {

using nlohmann::json;

void validate_record(const InstructRecord& r) {
    if (trim(r.instruction).empty()) throw PipelineError("record: empty instruction");
    if (trim(r.input).empty()) throw PipelineError("record: empty input");
    if (trim(r.output).empty()) throw PipelineError("record: empty output");
}

namespace {

json record_to_json(const InstructRecord& r) {
    return json{
        {"instruction", r.instruction},
        {"input", r.input},
        {"output", r.output},
        {"meta",
         {{"demand_id", r.meta.demand_id},
          {"source_call_id", r.meta.source_call_id},
          {"candidate_call_ids", r.meta.candidate_call_ids},
          {"template_id", r.meta.template_id},
          {"pipeline_version", r.meta.pipeline_version}}},
    };
}

InstructRecord record_from_json(const json& doc) {
    InstructRecord r;
    r.instruction = doc.at("instruction").get<std::string>();
    r.input = doc.at("input").get<std::string>();
    r.output = doc.at("output").get<std::string>();
    const auto& m = doc.at("meta");
    r.meta.demand_id = m.at("demand_id").get<std::string>();
    r.meta.source_call_id = m.at("source_call_id").get<std::string>();
    r.meta.candidate_call_ids = m.at("candidate_call_ids").get<std::vector<std::string>>();
    r.meta.template_id = m.at("template_id").get<std::string>();
    r.meta.pipeline_version = m.at("pipeline_version").get<std::string>();
    validate_record(r);
    return r;
}

}  // namespace

std::string encode_instruct_jsonl(const std::vector<InstructRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        validate_record(r);
        out += record_to_json(r).dump();
        out += '\n';
    }
    return out;
}

JsonlDecodeResult decode_instruct_jsonl(std::string_view bytes) {
    JsonlDecodeResult result;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        std::size_t eol = bytes.find('\n', pos);
        std::string_view line = bytes.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                                : eol - pos);
        pos = eol == std::string_view::npos ? bytes.size() : eol + 1;
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            result.records.push_back(record_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            result.errors.push_back({line_no, e.what()});
        }
    }
    return result;
}

}  // namespace c2i
