#pragma once

#include <optional>
#include <string>
#include <vector>

#include "c2i/common.hpp"

namespace c2i {

struct StageRecord {
    std::string stage_name;
    std::string input_digest;
    std::vector<std::string> output_paths;
    std::string completed_at;  // ISO-8601 UTC
    std::string tool_version;
};

// Per-stage artifact registry; one record per completed stage, rewritten as a
// whole on every update.
class WorkspaceManifest {
public:
    static WorkspaceManifest load(const std::string& path);
    void save(const std::string& path) const;

    const StageRecord* find(const std::string& stage_name) const;
    // Replaces any existing record for the stage; stage names stay unique.
    void upsert(StageRecord record);
    void remove_from(const std::string& stage_name, const std::vector<std::string>& stage_order);

    const std::vector<StageRecord>& records() const { return records_; }

private:
    std::vector<StageRecord> records_;
};

std::string now_iso8601_utc();

}  // namespace c2i
