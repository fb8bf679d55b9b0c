#include "c2i/manifest.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>

namespace c2i {

using nlohmann::json;

WorkspaceManifest WorkspaceManifest::load(const std::string& path) {
    WorkspaceManifest m;
    if (!std::filesystem::exists(path)) return m;
    json doc = json::parse(read_file(path));
    for (const auto& e : doc.at("stages")) {
        StageRecord r;
        r.stage_name = e.at("stage").get<std::string>();
        r.input_digest = e.at("input_digest").get<std::string>();
        r.output_paths = e.at("outputs").get<std::vector<std::string>>();
        r.completed_at = e.at("completed_at").get<std::string>();
        r.tool_version = e.at("tool_version").get<std::string>();
        if (m.find(r.stage_name))
            throw PipelineError("manifest: duplicate stage record " + r.stage_name);
        m.records_.push_back(std::move(r));
    }
    return m;
}

void WorkspaceManifest::save(const std::string& path) const {
    json stages = json::array();
    for (const auto& r : records_)
        stages.push_back({{"stage", r.stage_name},
                          {"input_digest", r.input_digest},
                          {"outputs", r.output_paths},
                          {"completed_at", r.completed_at},
                          {"tool_version", r.tool_version}});
    write_file(path, json{{"stages", std::move(stages)}}.dump(2) + "\n");
}

const StageRecord* WorkspaceManifest::find(const std::string& stage_name) const {
    for (const auto& r : records_)
        if (r.stage_name == stage_name) return &r;
    return nullptr;
}

void WorkspaceManifest::upsert(StageRecord record) {
    for (auto& r : records_) {
        if (r.stage_name == record.stage_name) {
            r = std::move(record);
            return;
        }
    }
    records_.push_back(std::move(record));
}

void WorkspaceManifest::remove_from(const std::string& stage_name,
                                    const std::vector<std::string>& stage_order) {
    auto pos = std::find(stage_order.begin(), stage_order.end(), stage_name);
    if (pos == stage_order.end()) return;
    std::vector<std::string> downstream(pos, stage_order.end());
    records_.erase(std::remove_if(records_.begin(), records_.end(),
                                  [&](const StageRecord& r) {
                                      return std::find(downstream.begin(), downstream.end(),
                                                       r.stage_name) != downstream.end();
                                  }),
                   records_.end());
}

std::string now_iso8601_utc() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace c2i
