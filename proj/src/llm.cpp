#include "c2i/llm.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <regex>
#include <set>
#include <thread>

namespace c2i {

using nlohmann::json;

const char* to_string(ChatTask t) {
    switch (t) {
        case ChatTask::rewrite_demand: return "rewrite_demand";
        case ChatTask::refine_response: return "refine_response";
        case ChatTask::synthesize_answer: return "synthesize_answer";
        case ChatTask::check_validity: return "check_validity";
    }
    return "?";
}

namespace {

std::string substitute(const std::string& text, const std::map<std::string, std::string>& values) {
    std::string out = text;
    for (const auto& [name, value] : values) {
        std::string needle = "{" + name + "}";
        std::size_t pos = 0;
        while ((pos = out.find(needle, pos)) != std::string::npos) {
            out.replace(pos, needle.size(), value);
            pos += value.size();
        }
    }
    return out;
}

void check_resolved(const std::string& text, const std::string& template_id) {
    static const std::regex placeholder(R"(\{[a-z_]+\})");
    std::smatch m;
    if (std::regex_search(text, m, placeholder))
        throw ConfigError("template " + template_id + ": unresolved placeholder " + m.str());
}

// Sentence splitter that keeps terminal punctuation. Handles ".?!" and the
// UTF-8 ellipsis.
std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        cur += c;
        bool terminal = (c == '.' || c == '?' || c == '!');
        if (!terminal && static_cast<unsigned char>(c) == 0xE2 && i + 2 < text.size() &&
            static_cast<unsigned char>(text[i + 1]) == 0x80 &&
            static_cast<unsigned char>(text[i + 2]) == 0xA6) {
            cur += text[i + 1];
            cur += text[i + 2];
            i += 2;
            terminal = true;
        }
        if (terminal) {
            std::string s = trim(cur);
            if (!s.empty()) out.push_back(std::move(s));
            cur.clear();
        }
    }
    std::string tail = trim(cur);
    if (!tail.empty()) out.push_back(std::move(tail));
    return out;
}

std::string strip_terminal(const std::string& sentence) {
    std::string s = trim(sentence);
    while (!s.empty() && (s.back() == '.' || s.back() == '?' || s.back() == '!')) s.pop_back();
    if (s.size() >= 3 && s.compare(s.size() - 3, 3, "\xe2\x80\xa6") == 0) s.resize(s.size() - 3);
    return trim(s);
}

const std::set<std::string>& intent_verbs() {
    static const std::set<std::string> verbs = {
        "quero", "queria", "preciso", "precisava", "gostaria", "como", "cancelar",
        "quando", "onde", "want", "need", "how", "cancel", "could", "would",
    };
    return verbs;
}

const std::set<std::string>& trailing_markers() {
    static const std::set<std::string> markers = {"sabe", "né", "entendeu", "tá", "viu", "ok"};
    return markers;
}

std::string capitalize_first(std::string s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (std::isalpha(c)) {
            s[i] = char(std::toupper(c));
            return s;
        }
        if (c == 0xC3 && i + 1 < s.size()) {
            unsigned char c2 = static_cast<unsigned char>(s[i + 1]);
            if (c2 >= 0xA0 && c2 <= 0xBE && c2 != 0xB7) s[i + 1] = char(c2 - 0x20);
            return s;
        }
        if (c >= 0x80) return s;
    }
    return s;
}

std::string mock_rewrite_v2(const std::string& utterances) {
    auto sentences = split_sentences(utterances);
    const std::string* chosen = nullptr;
    std::size_t verb_token = 0;
    std::vector<std::string> tokens;
    for (const auto& s : sentences) {
        auto toks = split_ws(strip_terminal(s));
        for (std::size_t i = 0; i < toks.size(); ++i) {
            if (intent_verbs().count(strip_punct_lower(toks[i]))) {
                chosen = &s;
                verb_token = i;
                tokens = toks;
                break;
            }
        }
        if (chosen) break;
    }
    if (!chosen) {
        // fallback: longest sentence, normalized
        std::string best;
        for (const auto& s : sentences)
            if (s.size() > best.size()) best = s;
        std::string core = strip_terminal(best);
        if (core.empty()) return "";
        return capitalize_first(core) + ".";
    }
    std::vector<std::string> kept(tokens.begin() + long(verb_token), tokens.end());
    // conjugation normalization for the leading verb
    static const std::map<std::string, std::string> verb_map = {
        {"queria", "quero"}, {"precisava", "preciso"},
    };
    std::string v = strip_punct_lower(kept[0]);
    auto it = verb_map.find(v);
    if (it != verb_map.end()) kept[0] = it->second;
    while (!kept.empty() && trailing_markers().count(strip_punct_lower(kept.back())))
        kept.pop_back();
    std::string joined = join(kept, " ");
    while (!joined.empty() && (joined.back() == ',' || joined.back() == ' ')) joined.pop_back();
    if (joined.empty()) return "";
    return capitalize_first(joined) + ".";
}

std::set<std::string> content_words(const std::string& text) {
    std::set<std::string> out;
    for (const auto& t : split_ws(text)) {
        std::string w = strip_punct_lower(t);
        if (w.size() >= 4) out.insert(w);
    }
    return out;
}

std::string mock_refine(const std::string& response, const std::string& demand) {
    auto sentences = split_sentences(response);
    auto demand_words = content_words(demand);
    std::vector<std::string> kept;
    for (const auto& s : sentences) {
        auto words = content_words(s);
        bool overlap = std::any_of(words.begin(), words.end(),
                                   [&](const std::string& w) { return demand_words.count(w) > 0; });
        if (overlap) kept.push_back(s);
    }
    if (kept.empty() || kept.size() == sentences.size()) return trim(response);
    return join(kept, " ");
}

std::string mock_synthesize(const std::vector<std::string>& candidates) {
    if (candidates.size() == 1) return candidates[0];
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& c : candidates) {
        for (const auto& s : split_sentences(c)) {
            std::string key = join(split_ws(to_lower(strip_terminal(s))), " ");
            if (key.empty() || seen.count(key)) continue;
            seen.insert(key);
            std::string sentence = s;
            char last = sentence.empty() ? ' ' : sentence.back();
            if (last != '.' && last != '?' && last != '!') sentence += ".";
            out.push_back(std::move(sentence));
        }
    }
    return join(out, " ");
}

std::string mock_check_validity(const std::string& demand) {
    int tokens = 0;
    bool has_alpha = false;
    for (const auto& t : split_ws(demand)) {
        std::string w = strip_punct_lower(t);
        if (w.empty()) continue;
        ++tokens;
        for (unsigned char c : w)
            if (std::isalpha(c) || c >= 0x80) has_alpha = true;
    }
    if (tokens < 3) return "invalid:too_short";
    if (!has_alpha) return "invalid:no_alpha";
    return "valid";
}

std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    std::size_t scheme = endpoint.find("://");
    std::size_t slash = endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (slash == std::string::npos) return {endpoint, "/"};
    return {endpoint.substr(0, slash), endpoint.substr(slash)};
}

void add_auth(httplib::Headers& headers) {
    if (const char* key = std::getenv("C2I_API_KEY"))
        headers.emplace("Authorization", std::string("Bearer ") + key);
}

}  // namespace

std::string render_template(const PromptTemplate& tmpl,
                            const std::map<std::string, std::string>& values) {
    std::string rendered = substitute(tmpl.system_text, values) + "\n\n";
    for (const auto& [in, out] : tmpl.few_shot_examples)
        rendered += "Example input: " + in + "\nExample output: " + out + "\n";
    rendered += substitute(tmpl.user_text, values);
    check_resolved(rendered, tmpl.template_id);
    return rendered;
}

PromptTemplate builtin_prompt(ChatTask task, const std::string& version) {
    PromptTemplate t;
    t.version = version;
    switch (task) {
        case ChatTask::rewrite_demand:
            t.template_id = "rewrite_demand_" + version;
            t.system_text =
                "Rewrite the customer's speech into one objective, direct question or request. "
                "Remove oral markers and keep a single sentence.";
            t.user_text = "Customer utterances:\n{utterances}";
            t.few_shot_examples = {
                {"é... eu tava ligando porque eu queria a segunda via da fatura, sabe",
                 "Quero a segunda via da fatura."}};
            break;
        case ChatTask::refine_response:
            t.template_id = "refine_response_" + version;
            t.system_text =
                "Rewrite the agent response to be clear, objective and focused on the "
                "customer's demand, discarding irrelevant details.";
            t.user_text = "Demand: {demand}\nAgent response:\n{response}";
            break;
        case ChatTask::synthesize_answer:
            t.template_id = "synthesize_answer_" + version;
            t.system_text =
                "Read the candidate responses and generate a single coherent answer that "
                "incorporates all relevant information without repetition.";
            t.user_text = "Demand: {demand}\nCandidates:\n{candidates}";
            break;
        case ChatTask::check_validity:
            t.template_id = "check_validity_" + version;
            t.system_text =
                "Decide whether the text is a genuine customer demand or a transcription "
                "fragment. Answer exactly 'valid' or 'invalid:<reason>'.";
            t.user_text = "Demand: {demand}";
            break;
    }
    return t;
}

ChatResponse MockChatBackend::complete(const ChatRequest& request) {
    ChatResponse res;
    switch (request.task) {
        case ChatTask::rewrite_demand: {
            const std::string& utterances = request.fields.at("utterances");
            res.text = (request.tmpl && request.tmpl->version == "v1") ? trim(utterances)
                                                                       : mock_rewrite_v2(utterances);
            break;
        }
        case ChatTask::refine_response:
            res.text = mock_refine(request.fields.at("response"), request.fields.at("demand"));
            break;
        case ChatTask::synthesize_answer:
            res.text = mock_synthesize(request.candidates);
            break;
        case ChatTask::check_validity:
            res.text = mock_check_validity(request.fields.at("demand"));
            break;
    }
    return res;
}

HttpChatBackend::HttpChatBackend(std::string endpoint, std::string model, RetryPolicy retry)
    : endpoint_(std::move(endpoint)), model_(std::move(model)), retry_(retry) {}

ChatResponse HttpChatBackend::complete(const ChatRequest& request) {
    auto [host, path] = split_endpoint(endpoint_);
    json messages = json::array();
    for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
    std::string body = json{{"model", model_}, {"messages", std::move(messages)}}.dump();

    httplib::Client client(host);
    httplib::Headers headers;
    add_auth(headers);
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) throw PipelineError("chat backend unreachable: " + endpoint_);
    if (res->status != 200)
        throw PipelineError("chat backend HTTP status " + std::to_string(res->status));
    json doc = json::parse(res->body);
    ChatResponse out;
    out.text = doc.at("text").get<std::string>();
    return out;
}

EmbeddingVector MockEmbedBackend::embed(const std::string& text) {
    std::uint64_t state = fnv1a64(text, seed_ ^ 0xcbf29ce484222325ull);
    EmbeddingVector v(dim_);
    for (int i = 0; i < dim_; ++i) v[i] = float(splitmix_unit(state) * 2.0 - 1.0);
    return v;
}

HttpEmbedBackend::HttpEmbedBackend(std::string endpoint, std::string model, int dim,
                                   RetryPolicy retry)
    : endpoint_(std::move(endpoint)), model_(std::move(model)), dim_(dim), retry_(retry) {}

EmbeddingVector HttpEmbedBackend::embed(const std::string& text) {
    auto [host, path] = split_endpoint(endpoint_);
    std::string body = json{{"model", model_}, {"input", text}}.dump();
    httplib::Client client(host);
    httplib::Headers headers;
    add_auth(headers);
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) throw PipelineError("embedding backend unreachable: " + endpoint_);
    if (res->status != 200)
        throw PipelineError("embedding backend HTTP status " + std::to_string(res->status));
    json doc = json::parse(res->body);
    auto values = doc.at("values").get<std::vector<float>>();
    if (int(values.size()) != dim_)
        throw PipelineError("embedding dimension mismatch: got " + std::to_string(values.size()) +
                            ", expected " + std::to_string(dim_));
    EmbeddingVector v(dim_);
    for (int i = 0; i < dim_; ++i) {
        if (!std::isfinite(values[std::size_t(i)]))
            throw PipelineError("embedding contains non-finite value");
        v[i] = values[std::size_t(i)];
    }
    return v;
}

ChatResponse LlmGateway::run(const ChatRequest& request) {
    std::uint64_t jitter_state = retry_.jitter_seed;
    std::string last_error;
    auto start = std::chrono::steady_clock::now();
    for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
        if (attempt > 1) {
            int delay = retry_.base_delay_ms << (attempt - 2);
            delay += int(splitmix64(jitter_state) % std::uint64_t(retry_.jitter_ceiling_ms + 1));
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        try {
            ChatResponse res = chat_->complete(request);
            res.attempt_count = attempt;
            res.latency_ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
            call_log_.push_back({request.tmpl ? request.tmpl->template_id : "",
                                 request.tmpl ? request.tmpl->version : "", attempt});
            return res;
        } catch (const std::exception& e) {
            last_error = e.what();
        }
    }
    throw PipelineError("chat backend failed after " + std::to_string(retry_.max_attempts) +
                        " attempts: " + last_error);
}

namespace {

std::string strip_quotes(std::string s) {
    s = trim(s);
    while (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                             (s.front() == '\'' && s.back() == '\'')))
        s = trim(s.substr(1, s.size() - 2));
    return s;
}

}  // namespace

std::string LlmGateway::rewrite_demand(const std::string& customer_utterances,
                                       const PromptTemplate& tmpl) {
    if (trim(customer_utterances).empty())
        throw PipelineError("rewrite_demand: empty customer utterances");
    ChatRequest req;
    req.task = ChatTask::rewrite_demand;
    req.tmpl = &tmpl;
    req.fields["utterances"] = customer_utterances;
    req.messages = {{"system", tmpl.system_text},
                    {"user", render_template(tmpl, {{"utterances", customer_utterances}})}};
    std::string out = strip_quotes(run(req).text);
    if (out.empty()) throw PipelineError("rewrite_demand: backend returned empty output");
    return out;
}

std::string LlmGateway::refine_response(const std::string& agent_response,
                                        const std::string& demand, const PromptTemplate& tmpl) {
    if (trim(agent_response).empty() || trim(demand).empty())
        throw PipelineError("refine_response: inputs must be non-empty");
    ChatRequest req;
    req.task = ChatTask::refine_response;
    req.tmpl = &tmpl;
    req.fields["response"] = agent_response;
    req.fields["demand"] = demand;
    req.messages = {{"system", tmpl.system_text},
                    {"user", render_template(tmpl, {{"demand", demand}, {"response", agent_response}})}};
    std::string out = strip_quotes(run(req).text);
    if (out.empty()) throw PipelineError("refine_response: backend returned empty output");
    return out;
}

std::string LlmGateway::synthesize_answer(const std::vector<std::string>& candidates,
                                          const std::string& demand, const PromptTemplate& tmpl) {
    if (candidates.empty()) throw PipelineError("synthesize_answer: empty candidate list");
    ChatRequest req;
    req.task = ChatTask::synthesize_answer;
    req.tmpl = &tmpl;
    req.candidates = candidates;
    req.fields["demand"] = demand;
    std::string numbered;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        numbered += std::to_string(i + 1) + ". " + candidates[i] + "\n";
    req.messages = {{"system", tmpl.system_text},
                    {"user", render_template(tmpl, {{"demand", demand}, {"candidates", numbered}})}};
    std::string out = strip_quotes(run(req).text);
    if (out.empty()) throw PipelineError("synthesize_answer: backend returned empty output");
    return out;
}

LlmGateway::Validity LlmGateway::check_demand_validity(const std::string& demand,
                                                       const PromptTemplate& tmpl) {
    ChatRequest req;
    req.task = ChatTask::check_validity;
    req.tmpl = &tmpl;
    req.fields["demand"] = demand;
    req.messages = {{"system", tmpl.system_text},
                    {"user", render_template(tmpl, {{"demand", demand}})}};
    std::string out = to_lower(trim(run(req).text));
    Validity v;
    if (starts_with(out, "invalid")) {
        v.valid = false;
        std::size_t colon = out.find(':');
        v.reason = colon == std::string::npos ? "unspecified" : out.substr(colon + 1);
    }
    return v;
}

EmbeddingVector LlmGateway::embed(const std::string& text) {
    if (trim(text).empty()) throw PipelineError("embed: empty text");
    std::uint64_t jitter_state = retry_.jitter_seed;
    std::string last_error;
    for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
        if (attempt > 1) {
            int delay = retry_.base_delay_ms << (attempt - 2);
            delay += int(splitmix64(jitter_state) % std::uint64_t(retry_.jitter_ceiling_ms + 1));
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        try {
            return embedder_->embed(text);
        } catch (const std::exception& e) {
            last_error = e.what();
        }
    }
    throw PipelineError("embedding backend failed after " + std::to_string(retry_.max_attempts) +
                        " attempts: " + last_error);
}

}  // namespace c2i
