#include "c2i/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>

#include "c2i/anonymize.hpp"
#include "c2i/features.hpp"
#include "c2i/ivr.hpp"
#include "c2i/qagen.hpp"
#include "c2i/textclean.hpp"
#include "c2i/vecstore.hpp"

namespace c2i {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& canonical_stages() {
    static const std::vector<std::string> stages = {
        "ingest", "ivr", "asr", "clean", "anonymize",
        "extract", "embed", "index", "generate", "validate",
    };
    return stages;
}

Pipeline::Pipeline(PipelineConfig config, bool verbose)
    : config_(std::move(config)), verbose_(verbose) {
    fs::create_directories(config_.workspace_dir);
    RetryPolicy retry;
    switch (config_.asr_backend) {
        case BackendKind::mock: asr_ = std::make_shared<MockAsrBackend>(); break;
        case BackendKind::external_command:
            asr_ = std::make_shared<CommandAsrBackend>(config_.asr_command);
            break;
        case BackendKind::http:
            asr_ = std::make_shared<HttpAsrBackend>(config_.asr_endpoint, retry);
            break;
    }
    if (config_.llm_backend == BackendKind::mock)
        chat_ = std::make_shared<MockChatBackend>();
    else
        chat_ = std::make_shared<HttpChatBackend>(config_.llm_endpoint, "default", retry);
    if (config_.embed_backend == BackendKind::mock)
        embedder_ = std::make_shared<MockEmbedBackend>(config_.embed_dim, config_.ivr.seed);
    else
        embedder_ = std::make_shared<HttpEmbedBackend>(config_.embed_endpoint, "default",
                                                       config_.embed_dim, retry);
}

LlmGateway Pipeline::make_gateway() { return LlmGateway(chat_, embedder_); }

std::string Pipeline::workspace_path(const std::string& stage, const std::string& file) const {
    fs::path p = fs::path(config_.workspace_dir) / stage;
    if (!file.empty()) p /= file;
    return p.string();
}

std::vector<std::string> Pipeline::list_calls(const std::string& stage_dir,
                                              const std::string& ext) const {
    std::vector<std::string> ids;
    if (!fs::is_directory(stage_dir)) return ids;
    for (const auto& entry : fs::directory_iterator(stage_dir)) {
        if (!entry.is_regular_file()) continue;
        fs::path p = entry.path();
        if (p.extension() == ext && p.stem().string().find('.') == std::string::npos)
            ids.push_back(p.stem().string());
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::string Pipeline::stage_input_digest(const std::string& stage,
                                         const WorkspaceManifest& manifest) const {
    std::uint64_t h = fnv1a64(config_.digest_subsection(stage));
    std::vector<std::string> inputs;
    if (stage == "ingest") {
        for (const auto& entry : fs::directory_iterator(config_.input_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".wav")
                inputs.push_back(entry.path().string());
    } else {
        const auto& order = canonical_stages();
        auto pos = std::find(order.begin(), order.end(), stage);
        const StageRecord* upstream = manifest.find(*(pos - 1));
        if (upstream) inputs = upstream->output_paths;
    }
    std::sort(inputs.begin(), inputs.end());
    for (const auto& path : inputs) {
        h = fnv1a64(fs::path(path).filename().string(), h);
        if (fs::is_regular_file(path)) h = fnv1a64(read_file(path), h);
    }
    return to_hex(h);
}

RunReport Pipeline::run(const std::vector<std::string>& stages, bool resume) {
    const auto& order = canonical_stages();
    // requested stages must appear in canonical order
    std::size_t cursor = 0;
    for (const auto& s : stages) {
        auto pos = std::find(order.begin() + long(cursor), order.end(), s);
        if (pos == order.end()) {
            if (std::find(order.begin(), order.end(), s) != order.end())
                throw PipelineError("stages out of canonical order near '" + s + "'");
            throw PipelineError("unknown stage '" + s + "'");
        }
        cursor = std::size_t(pos - order.begin()) + 1;
    }

    std::string manifest_path = workspace_path("", "manifest.json");
    WorkspaceManifest manifest = WorkspaceManifest::load(manifest_path);

    RunReport report;
    for (const auto& stage : stages) {
        // dependency: upstream stage must be complete or part of this run
        auto pos = std::find(order.begin(), order.end(), stage);
        if (pos != order.begin()) {
            const std::string& upstream = *(pos - 1);
            bool in_run = std::find(stages.begin(), stages.end(), upstream) != stages.end();
            if (!in_run && !manifest.find(upstream))
                throw PipelineError("stage '" + stage + "' requires completed stage '" + upstream +
                                    "' which has not run");
        }

        std::string digest = stage_input_digest(stage, manifest);
        const StageRecord* existing = manifest.find(stage);
        bool outputs_exist = existing && std::all_of(existing->output_paths.begin(),
                                                     existing->output_paths.end(),
                                                     [](const std::string& p) { return fs::exists(p); });
        if (resume && existing && existing->input_digest == digest && outputs_exist) {
            if (verbose_) std::cerr << "[skip] " << stage << " (digest unchanged)\n";
            report.stages.push_back({stage, 0, true, 0.0});
            if (stage == "validate") {
                // re-read the persisted report so the caller still sees the gates
                std::string report_path = workspace_path("validate", "report.json");
                if (fs::exists(report_path)) {
                    json doc = json::parse(read_file(report_path));
                    ValidationReport vr;
                    vr.total_records = doc.at("total_records").get<std::size_t>();
                    vr.coherent = doc.at("coherent").get<std::size_t>();
                    vr.demands_in = doc.at("completeness").at("demands_in").get<std::size_t>();
                    vr.pairs_out = doc.at("completeness").at("pairs_out").get<std::size_t>();
                    vr.leak_violations = doc.at("leak_violations").get<std::size_t>();
                    vr.invalid_demand_count = doc.at("invalid_demand_count").get<std::size_t>();
                    vr.sample_path = doc.at("sample_path").get<std::string>();
                    for (const auto& [k, v] :
                         doc.at("completeness").at("skipped_with_reason").items())
                        vr.skipped_with_reason[k] = v.get<std::size_t>();
                    report.validation = std::move(vr);
                }
            }
            continue;
        }

        if (verbose_) std::cerr << "[run ] " << stage << "\n";
        fs::create_directories(workspace_path(stage));
        auto started = std::chrono::steady_clock::now();
        std::vector<std::string> outputs;
        std::size_t items = run_stage(stage, manifest, outputs, report);
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              started)
                        .count();
        manifest.upsert({stage, digest, outputs, now_iso8601_utc(), kPipelineVersion});
        manifest.save(manifest_path);
        report.stages.push_back({stage, items, false, ms});
    }
    return report;
}

std::size_t Pipeline::run_stage(const std::string& stage, WorkspaceManifest& manifest,
                                std::vector<std::string>& outputs, RunReport& report) {
    (void)manifest;
    if (stage == "ingest") return stage_ingest(outputs);
    if (stage == "ivr") return stage_ivr(outputs);
    if (stage == "asr") return stage_asr(outputs);
    if (stage == "clean") return stage_clean(outputs);
    if (stage == "anonymize") return stage_anonymize(outputs);
    if (stage == "extract") return stage_extract(outputs);
    if (stage == "embed") return stage_embed(outputs);
    if (stage == "index") return stage_index(outputs);
    if (stage == "generate") return stage_generate(outputs);
    if (stage == "validate") return stage_validate(outputs, report);
    throw PipelineError("unknown stage '" + stage + "'");
}

std::size_t Pipeline::stage_ingest(std::vector<std::string>& outputs) {
    std::size_t count = 0;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(config_.input_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".wav")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        std::string call_id = path.stem().string();
        DecodedAudio decoded = decode_wav(read_file(path.string()));
        StereoCall call;
        call.call_id = call_id;
        if (auto* stereo = std::get_if<StereoCall>(&decoded)) {
            call.agent = std::move(stereo->agent);
            call.customer = std::move(stereo->customer);
        } else {
            // mixed mono: accepted, but speaker attribution is unsupported;
            // duplicate the channel so the downstream contract holds
            auto& mono = std::get<AudioClip>(decoded);
            std::cerr << "[warn] " << call_id
                      << ": mono input, speaker attribution unsupported\n";
            call.agent = mono;
            call.customer = std::move(mono);
            call.agent.channel_label = ChannelLabel::agent;
            call.customer.channel_label = ChannelLabel::customer;
        }
        call.agent = noise_gate(resample(call.agent, config_.sample_rate_hz), -40.0, 0.05);
        call.customer = noise_gate(resample(call.customer, config_.sample_rate_hz), -40.0, 0.05);
        std::string out_path = workspace_path("ingest", call_id + ".wav");
        write_file(out_path, encode_wav_pcm16_stereo(call.agent, call.customer));
        outputs.push_back(out_path);
        ++count;
    }
    if (count == 0) throw PipelineError("ingest: no .wav files in " + config_.input_dir);
    return count;
}

std::size_t Pipeline::stage_ivr(std::vector<std::string>& outputs) {
    std::string decisions;
    std::size_t count = 0;
    for (const auto& call_id : list_calls(workspace_path("ingest"), ".wav")) {
        auto decoded = decode_wav(read_file(workspace_path("ingest", call_id + ".wav")));
        StereoCall call;
        call.call_id = call_id;
        auto& stereo = std::get<StereoCall>(decoded);
        call.agent = std::move(stereo.agent);
        call.customer = std::move(stereo.customer);

        IvrDecision decision;
        double inertia = 0.0;
        if (call.agent.duration_s() >= config_.ivr.window_s) {
            auto windows =
                extract_feature_windows(call.agent, config_.ivr.window_s, config_.ivr.hop_s);
            if (int(windows.size()) >= config_.ivr.k) {
                ClusterModel model = kmeans(feature_matrix(windows), config_.ivr.k,
                                            config_.ivr.seed);
                inertia = model.inertia;
                decision = detect_ivr_boundary(model, config_.ivr.head_windows,
                                               config_.ivr.consec_m, config_.ivr.hop_s);
            }
        }
        TrimResult trimmed = trim_ivr(call, decision);
        if (trimmed.warning && verbose_) std::cerr << "[warn] " << *trimmed.warning << "\n";

        json line = {{"call_id", call_id},
                     {"boundary_s", decision.boundary_s ? json(*decision.boundary_s) : json()},
                     {"trimmed", decision.trimmed},
                     {"ivr_cluster", decision.ivr_cluster},
                     {"inertia", inertia},
                     {"excluded", decision.entirely_ivr}};
        decisions += line.dump() + "\n";
        if (decision.entirely_ivr) {
            std::cerr << "[warn] " << call_id << ": entirely IVR, excluded downstream\n";
            continue;
        }
        std::string out_path = workspace_path("ivr", call_id + ".wav");
        write_file(out_path,
                   encode_wav_pcm16_stereo(trimmed.call.agent, trimmed.call.customer));
        outputs.push_back(out_path);
        ++count;
    }
    std::string decisions_path = workspace_path("ivr", "decisions.jsonl");
    write_file(decisions_path, decisions);
    outputs.push_back(decisions_path);
    return count;
}

std::size_t Pipeline::stage_asr(std::vector<std::string>& outputs) {
    std::size_t count = 0;
    for (const auto& call_id : list_calls(workspace_path("ivr"), ".wav")) {
        auto decoded = decode_wav(read_file(workspace_path("ivr", call_id + ".wav")));
        auto& call = std::get<StereoCall>(decoded);
        auto agent_segments = transcribe(call.agent, Speaker::agent, *asr_);
        auto customer_segments = transcribe(call.customer, Speaker::customer, *asr_);
        CallTranscript transcript = merge_channels(agent_segments, customer_segments, call_id);
        std::string out_path = workspace_path("asr", call_id + ".json");
        write_file(out_path, transcript_to_json(transcript));
        outputs.push_back(out_path);
        ++count;
    }
    return count;
}

std::size_t Pipeline::stage_clean(std::vector<std::string>& outputs) {
    std::size_t count = 0;
    for (const auto& call_id : list_calls(workspace_path("asr"), ".json")) {
        CallTranscript transcript =
            transcript_from_json(read_file(workspace_path("asr", call_id + ".json")));
        CleanOptions options;
        CleaningReport cleaning_report;
        CallTranscript cleaned = clean_transcript(transcript, options, &cleaning_report);
        std::string out_path = workspace_path("clean", call_id + ".json");
        write_file(out_path, transcript_to_json(cleaned));
        outputs.push_back(out_path);
        std::string report_lines;
        for (const auto& seg : cleaning_report.segments) {
            json line = {{"segment", seg.segment_ref},
                         {"operators", seg.operators_applied},
                         {"dropped", seg.dropped}};
            if (seg.drop_reason)
                line["drop_reason"] = *seg.drop_reason == DropReason::hallucination
                                          ? "hallucination"
                                          : "empty_after_clean";
            report_lines += line.dump() + "\n";
        }
        std::string report_path = workspace_path("clean", call_id + ".report.jsonl");
        write_file(report_path, report_lines);
        outputs.push_back(report_path);
        ++count;
    }
    return count;
}

std::size_t Pipeline::stage_anonymize(std::vector<std::string>& outputs) {
    std::vector<PiiRule> loaded_rules;
    if (!config_.pii_rules.empty()) loaded_rules = load_pii_rules(config_.pii_rules);
    const std::vector<PiiRule>& rules =
        config_.pii_rules.empty() ? default_pii_rules() : loaded_rules;
    std::size_t count = 0;
    for (const auto& call_id : list_calls(workspace_path("clean"), ".json")) {
        CallTranscript transcript =
            transcript_from_json(read_file(workspace_path("clean", call_id + ".json")));
        std::string redaction_lines;
        for (auto& seg : transcript.segments) {
            auto spans = detect_pii(seg.text, rules);
            if (spans.empty()) continue;
            RedactionReport rr;
            seg.text = redact(seg.text, spans, &rr);
            json counts = json::object();
            for (const auto& [cat, n] : rr.category_counts) counts[cat] = n;
            json digests = json::array();
            for (const auto& s : spans) digests.push_back(s.original_digest);
            redaction_lines +=
                json{{"start", seg.start_s}, {"counts", counts}, {"digests", digests}}.dump() + "\n";
        }
        std::string out_path = workspace_path("anonymize", call_id + ".json");
        write_file(out_path, transcript_to_json(transcript));
        outputs.push_back(out_path);
        std::string report_path = workspace_path("anonymize", call_id + ".redactions.jsonl");
        write_file(report_path, redaction_lines);
        outputs.push_back(report_path);
        ++count;
    }
    return count;
}

std::size_t Pipeline::stage_extract(std::vector<std::string>& outputs) {
    LlmGateway gateway = make_gateway();
    PromptTemplate rewrite_tmpl = builtin_prompt(ChatTask::rewrite_demand, "v2");
    PromptTemplate validity_tmpl = builtin_prompt(ChatTask::check_validity, "v2");
    std::string demand_lines, response_lines, excluded_lines;
    std::size_t count = 0;
    for (const auto& call_id : list_calls(workspace_path("anonymize"), ".json")) {
        CallTranscript transcript =
            transcript_from_json(read_file(workspace_path("anonymize", call_id + ".json")));
        std::string raw;
        try {
            raw = extract_demand_utterances(transcript);
        } catch (const std::exception& e) {
            excluded_lines += json{{"call_id", call_id}, {"reason", e.what()}}.dump() + "\n";
            continue;
        }
        std::string rewritten = gateway.rewrite_demand(raw, rewrite_tmpl);
        auto validity = gateway.check_demand_validity(rewritten, validity_tmpl);
        json demand = {{"demand_id", call_id + "-d0"},
                       {"call_id", call_id},
                       {"raw", raw},
                       {"rewritten", rewritten},
                       {"validity", validity.valid ? "valid" : "invalid"}};
        if (!validity.valid) demand["invalid_reason"] = validity.reason;
        demand_lines += demand.dump() + "\n";
        std::string response = extract_response_utterances(transcript);
        if (!response.empty()) {
            response_lines +=
                json{{"call_id", call_id}, {"text", response}}.dump() + "\n";
        } else if (verbose_) {
            std::cerr << "[warn] " << call_id << ": no agent response after demand window\n";
        }
        ++count;
    }
    std::string demands_path = workspace_path("extract", "demands.jsonl");
    std::string responses_path = workspace_path("extract", "responses.jsonl");
    std::string excluded_path = workspace_path("extract", "excluded.jsonl");
    write_file(demands_path, demand_lines);
    write_file(responses_path, response_lines);
    write_file(excluded_path, excluded_lines);
    outputs.insert(outputs.end(), {demands_path, responses_path, excluded_path});
    return count;
}

namespace {

std::vector<json> read_jsonl(const std::string& path) {
    std::vector<json> out;
    if (!fs::exists(path)) return out;
    for (const auto& line : split(read_file(path), '\n'))
        if (!trim(line).empty()) out.push_back(json::parse(line));
    return out;
}

json embedding_to_json(const EmbeddingVector& v) {
    json values = json::array();
    for (int i = 0; i < int(v.size()); ++i) values.push_back(v[i]);
    return values;
}

EmbeddingVector embedding_from_json(const json& values) {
    EmbeddingVector v(int(values.size()));
    for (int i = 0; i < int(v.size()); ++i) v[i] = values[std::size_t(i)].get<float>();
    return v;
}

}  // namespace

std::size_t Pipeline::stage_embed(std::vector<std::string>& outputs) {
    LlmGateway gateway = make_gateway();
    std::string lines;
    std::size_t count = 0;
    for (const auto& d : read_jsonl(workspace_path("extract", "demands.jsonl"))) {
        EmbeddingVector v = gateway.embed(d.at("rewritten").get<std::string>());
        lines += json{{"entry_id", d.at("demand_id")},
                      {"call_id", d.at("call_id")},
                      {"persona", "customer"},
                      {"text", d.at("rewritten")},
                      {"values", embedding_to_json(v)}}
                     .dump() +
                 "\n";
        ++count;
    }
    for (const auto& r : read_jsonl(workspace_path("extract", "responses.jsonl"))) {
        EmbeddingVector v = gateway.embed(r.at("text").get<std::string>());
        lines += json{{"entry_id", r.at("call_id").get<std::string>() + "-r0"},
                      {"call_id", r.at("call_id")},
                      {"persona", "agent"},
                      {"text", r.at("text")},
                      {"values", embedding_to_json(v)}}
                     .dump() +
                 "\n";
        ++count;
    }
    std::string path = workspace_path("embed", "embeddings.jsonl");
    write_file(path, lines);
    outputs.push_back(path);
    return count;
}

std::size_t Pipeline::stage_index(std::vector<std::string>& outputs) {
    VectorIndex index(config_.embed_dim);
    std::size_t count = 0;
    for (const auto& e : read_jsonl(workspace_path("embed", "embeddings.jsonl"))) {
        VectorEntry entry;
        entry.entry_id = e.at("entry_id").get<std::string>();
        entry.call_id = e.at("call_id").get<std::string>();
        entry.persona = speaker_from_string(e.at("persona").get<std::string>());
        entry.text = e.at("text").get<std::string>();
        entry.embedding = embedding_from_json(e.at("values"));
        index.insert(std::move(entry));
        ++count;
    }
    std::string path = workspace_path("index", "index.bin");
    index.persist(path);
    outputs.push_back(path);
    return count;
}

std::size_t Pipeline::stage_generate(std::vector<std::string>& outputs) {
    LlmGateway gateway = make_gateway();
    VectorIndex index = VectorIndex::load(workspace_path("index", "index.bin"));

    std::map<std::string, EmbeddingVector> embeddings;
    for (const auto& e : read_jsonl(workspace_path("embed", "embeddings.jsonl")))
        embeddings[e.at("entry_id").get<std::string>()] = embedding_from_json(e.at("values"));

    std::vector<Demand> demands;
    std::map<std::string, std::string> demand_call;
    for (const auto& d : read_jsonl(workspace_path("extract", "demands.jsonl"))) {
        Demand demand;
        demand.demand_id = d.at("demand_id").get<std::string>();
        demand.call_id = d.at("call_id").get<std::string>();
        demand.raw_utterances = d.at("raw").get<std::string>();
        demand.rewritten = d.at("rewritten").get<std::string>();
        demand.validity = d.at("validity").get<std::string>() == "valid" ? DemandValidity::valid
                                                                         : DemandValidity::invalid;
        auto it = embeddings.find(demand.demand_id);
        if (it == embeddings.end())
            throw PipelineError("generate: missing embedding for " + demand.demand_id);
        demand.embedding = it->second;
        demand_call[demand.demand_id] = demand.call_id;
        demands.push_back(std::move(demand));
    }
    std::sort(demands.begin(), demands.end(),
              [](const Demand& a, const Demand& b) { return a.demand_id < b.demand_id; });

    std::vector<PairAudit> audit;
    std::vector<QaPair> pairs = build_pairs(demands, index, gateway, config_.top_n, &audit);

    const std::vector<InstructTemplate> templates =
        config_.instruct_templates.empty() ? default_instruct_templates()
                                           : load_instruct_templates(config_.instruct_templates);
    std::vector<InstructRecord> records;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        records.push_back(format_instruct(pairs[i], demand_call.at(pairs[i].demand_id), templates,
                                          config_.ivr.seed, i));

    std::string dataset_path = workspace_path("generate", "dataset.jsonl");
    write_file(dataset_path, encode_instruct_jsonl(records));
    std::string audit_lines;
    for (const auto& a : audit) {
        json hits = json::array();
        for (const auto& h : a.hits)
            hits.push_back({{"entry_id", h.entry_id}, {"call_id", h.call_id}, {"score", h.score}});
        json line = {{"demand_id", a.demand_id},
                     {"hits", std::move(hits)},
                     {"refined_lengths", a.refined_lengths},
                     {"skipped", a.skipped}};
        if (a.skipped) line["skip_reason"] = a.skip_reason;
        audit_lines += line.dump() + "\n";
    }
    std::string audit_path = workspace_path("generate", "audit.jsonl");
    write_file(audit_path, audit_lines);
    outputs.insert(outputs.end(), {dataset_path, audit_path});
    return pairs.size();
}

std::size_t Pipeline::stage_validate(std::vector<std::string>& outputs, RunReport& report) {
    auto decoded = decode_instruct_jsonl(read_file(workspace_path("generate", "dataset.jsonl")));
    if (!decoded.errors.empty())
        throw PipelineError("validate: dataset has " + std::to_string(decoded.errors.size()) +
                            " malformed lines (first at line " +
                            std::to_string(decoded.errors[0].line_number) + ")");
    const auto& records = decoded.records;

    ValidationReport vr;
    vr.total_records = records.size();

    auto coherence = check_coherence(records);
    std::vector<std::string> coherence_failures;
    for (const auto& c : coherence) {
        if (c.pass)
            ++vr.coherent;
        else
            coherence_failures.push_back(std::to_string(c.record_index) + ":" +
                                         join(c.reasons, "+"));
    }

    LlmGateway gateway = make_gateway();
    std::vector<EmbeddingVector> question_embeddings;
    for (const auto& r : records) question_embeddings.push_back(gateway.embed(r.input));
    vr.flagged_redundant =
        check_redundancy(records, question_embeddings, config_.redundancy_threshold);

    std::vector<PiiRule> loaded_rules;
    if (!config_.pii_rules.empty()) loaded_rules = load_pii_rules(config_.pii_rules);
    const std::vector<PiiRule>& rules =
        config_.pii_rules.empty() ? default_pii_rules() : loaded_rules;
    auto violations = leak_scan(records, rules);
    vr.leak_violations = violations.size();

    auto demand_docs = read_jsonl(workspace_path("extract", "demands.jsonl"));
    vr.demands_in = demand_docs.size();
    for (const auto& d : demand_docs)
        if (d.at("validity").get<std::string>() == "invalid") ++vr.invalid_demand_count;
    for (const auto& a : read_jsonl(workspace_path("generate", "audit.jsonl")))
        if (a.at("skipped").get<bool>())
            ++vr.skipped_with_reason["generate_failure"];
    vr.pairs_out = records.size();
    check_accounting(vr);

    auto sample = review_sample(records, config_.ivr.seed);
    std::string sample_path = workspace_path("validate", "review_sample.jsonl");
    write_file(sample_path, encode_instruct_jsonl(sample));
    vr.sample_path = sample_path;

    std::string report_path = workspace_path("validate", "report.json");
    write_file(report_path, report_to_json(vr) + "\n");
    outputs.insert(outputs.end(), {report_path, sample_path});
    report.validation = vr;

    if (vr.leak_violations > 0)
        throw LeakGateError("validate: " + std::to_string(vr.leak_violations) +
                            " PII leak violations; release gate failed");
    if (!coherence_failures.empty())
        throw CoherenceGateError("validate: coherence failures: " + join(coherence_failures, ", "));
    return records.size();
}

}  // namespace c2i
