#pragma once

#include <Eigen/Core>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "c2i/asr.hpp"  // RetryPolicy
#include "c2i/common.hpp"

namespace c2i {

enum class ChatTask { rewrite_demand, refine_response, synthesize_answer, check_validity };

const char* to_string(ChatTask t);

struct PromptTemplate {
    std::string template_id;
    std::string version;  // "v1" / "v2"
    std::string system_text;
    std::string user_text;  // named {placeholder}s
    std::vector<std::pair<std::string, std::string>> few_shot_examples;
};

// Rendering is total: an unresolved placeholder throws, never substitutes empty.
std::string render_template(const PromptTemplate& tmpl,
                            const std::map<std::string, std::string>& values);

PromptTemplate builtin_prompt(ChatTask task, const std::string& version);

struct ChatMessage {
    std::string role;
    std::string content;
};

struct ChatRequest {
    ChatTask task = ChatTask::rewrite_demand;
    const PromptTemplate* tmpl = nullptr;
    std::vector<ChatMessage> messages;  // rendered, what HTTP backends see
    // structured fields, what rule-based mocks see
    std::map<std::string, std::string> fields;
    std::vector<std::string> candidates;
};

struct ChatResponse {
    std::string text;
    int attempt_count = 1;
    double latency_ms = 0.0;
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

// Deterministic rule-based stand-in for the hosted chat model; pure function of
// the request fields and template version.
class MockChatBackend : public ChatBackend {
public:
    ChatResponse complete(const ChatRequest& request) override;
};

// POST {model, messages:[{role, content}]} -> {text}; auth from C2I_API_KEY.
class HttpChatBackend : public ChatBackend {
public:
    HttpChatBackend(std::string endpoint, std::string model, RetryPolicy retry);
    ChatResponse complete(const ChatRequest& request) override;

private:
    std::string endpoint_;
    std::string model_;
    RetryPolicy retry_;
};

using EmbeddingVector = Eigen::VectorXf;

class EmbedBackend {
public:
    virtual ~EmbedBackend() = default;
    virtual EmbeddingVector embed(const std::string& text) = 0;
    virtual int dim() const = 0;
};

// Seeded hash of the text expanded to dim values in [-1, 1].
class MockEmbedBackend : public EmbedBackend {
public:
    explicit MockEmbedBackend(int dim, std::uint64_t seed = 0x5eed) : dim_(dim), seed_(seed) {}
    EmbeddingVector embed(const std::string& text) override;
    int dim() const override { return dim_; }

private:
    int dim_;
    std::uint64_t seed_;
};

// POST {model, input} -> {values:[...]}; rejects wrong-dimension responses.
class HttpEmbedBackend : public EmbedBackend {
public:
    HttpEmbedBackend(std::string endpoint, std::string model, int dim, RetryPolicy retry);
    EmbeddingVector embed(const std::string& text) override;
    int dim() const override { return dim_; }

private:
    std::string endpoint_;
    std::string model_;
    int dim_;
    RetryPolicy retry_;
};

struct GatewayCallRecord {
    std::string template_id;
    std::string version;
    int attempts = 1;
};

// Gateway operations. Each records {template_id, version, attempts} provenance.
class LlmGateway {
public:
    LlmGateway(std::shared_ptr<ChatBackend> chat, std::shared_ptr<EmbedBackend> embedder,
               RetryPolicy retry = {})
        : chat_(std::move(chat)), embedder_(std::move(embedder)), retry_(retry) {}

    std::string rewrite_demand(const std::string& customer_utterances, const PromptTemplate& tmpl);
    std::string refine_response(const std::string& agent_response, const std::string& demand,
                                const PromptTemplate& tmpl);
    std::string synthesize_answer(const std::vector<std::string>& candidates,
                                  const std::string& demand, const PromptTemplate& tmpl);

    struct Validity {
        bool valid = true;
        std::string reason;
    };
    Validity check_demand_validity(const std::string& demand, const PromptTemplate& tmpl);

    EmbeddingVector embed(const std::string& text);
    int embedding_dim() const { return embedder_->dim(); }

    const std::vector<GatewayCallRecord>& call_log() const { return call_log_; }

private:
    ChatResponse run(const ChatRequest& request);
    std::shared_ptr<ChatBackend> chat_;
    std::shared_ptr<EmbedBackend> embedder_;
    RetryPolicy retry_;
    std::vector<GatewayCallRecord> call_log_;
};

}  // namespace c2i
