// Command-line front end for the call-center instruct-dataset pipeline.
//
// Exit codes: 0 success, 1 stage failure, 2 configuration error,
// 3 anonymization leak gate, 4 coherence gate.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "c2i/pipeline.hpp"
#include "c2i/records.hpp"

#include <set>

namespace {

// CLI verb -> internal stage name. Most match, two are renamed for clarity.
const std::vector<std::pair<std::string, std::string>> kSubcommands = {
    {"ingest", "ingest"},       {"detect-ivr", "ivr"},  {"transcribe", "asr"},
    {"clean", "clean"},         {"anonymize", "anonymize"}, {"extract", "extract"},
    {"embed", "embed"},         {"index", "index"},     {"generate", "generate"},
    {"validate", "validate"},
};

void print_report(const c2i::RunReport& report, bool verbose) {
    for (const auto& stage : report.stages) {
        if (stage.skipped)
            std::printf("%-10s skipped (up to date)\n", stage.name.c_str());
        else
            std::printf("%-10s %zu item(s) in %.1f ms\n", stage.name.c_str(), stage.items,
                        stage.duration_ms);
    }
    if (verbose && report.validation) {
        const auto& v = *report.validation;
        std::printf("validation: %zu records, %zu coherent, %zu redundant pair(s), "
                    "%zu leak violation(s)\n",
                    v.total_records, v.coherent, v.flagged_redundant.size(), v.leak_violations);
    }
}

// Curation pass: drop the later record of each flagged-redundant pair and write
// the result alongside the validation report. The source dataset is untouched.
void write_curated(const c2i::PipelineConfig& config, const c2i::ValidationReport& validation) {
    std::string dataset = c2i::read_file(config.workspace_dir + "/generate/dataset.jsonl");
    auto decoded = c2i::decode_instruct_jsonl(dataset);
    std::set<std::size_t> dropped;
    for (const auto& pair : validation.flagged_redundant) dropped.insert(pair.second);
    std::vector<c2i::InstructRecord> kept;
    for (std::size_t i = 0; i < decoded.records.size(); ++i)
        if (!dropped.count(i)) kept.push_back(decoded.records[i]);
    std::string out = config.workspace_dir + "/validate/curated.jsonl";
    c2i::write_file(out, c2i::encode_instruct_jsonl(kept));
    std::printf("curated dataset: %zu of %zu record(s) kept -> %s\n", kept.size(),
                decoded.records.size(), out.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Convert two-channel call recordings into an instruct-tuning dataset"};
    app.require_subcommand(1);
    app.fallthrough();  // accept the global options after the subcommand too

    std::string config_path;
    bool resume = false;
    bool verbose = false;
    app.add_option("--config", config_path, "Pipeline configuration file")->required();
    app.add_flag("--resume", resume, "Skip stages whose inputs are unchanged");
    app.add_flag("--verbose", verbose, "Print per-stage progress detail");

    std::vector<std::string> requested;
    bool drop_flagged = false;
    for (const auto& [verb, stage] : kSubcommands) {
        auto* sub = app.add_subcommand(verb, "Run the " + stage + " stage");
        sub->callback([&requested, stage = stage] { requested.push_back(stage); });
        if (stage == "validate")
            sub->add_flag("--drop-flagged", drop_flagged,
                          "Also write a curated dataset without flagged-redundant records");
    }
    app.add_subcommand("run-all", "Run every stage in order")->callback([&requested] {
        requested = c2i::canonical_stages();
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        c2i::PipelineConfig config = c2i::load_config(config_path);
        c2i::Pipeline pipeline(config, verbose);
        c2i::RunReport report = pipeline.run(requested, resume);
        print_report(report, verbose);
        if (drop_flagged && report.validation) write_curated(config, *report.validation);
        return 0;
    } catch (const c2i::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const c2i::LeakGateError& e) {
        std::fprintf(stderr, "leak gate: %s\n", e.what());
        return 3;
    } catch (const c2i::CoherenceGateError& e) {
        std::fprintf(stderr, "coherence gate: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
