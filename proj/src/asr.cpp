#include "c2i/asr.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <thread>

namespace c2i {

std::string clip_digest(const AudioClip& clip) {
    std::uint64_t h = fnv1a64_bytes(clip.samples.data(), std::size_t(clip.samples.size()) * sizeof(double));
    h = fnv1a64(std::to_string(clip.sample_rate_hz), h);
    return to_hex(h);
}

void MockAsrBackend::register_fixture(const std::string& digest,
                                      std::vector<TranscriptSegment> segments) {
    fixtures_[digest] = std::move(segments);
}

namespace {

// Sentence pools for synthesized mock transcripts. Openers always carry an
// intent verb, closers are long enough to count as substantive turns.
const std::vector<std::string>& opener_pool() {
    static const std::vector<std::string> pool = {
        "é eu queria a segunda via da fatura por favor",
        "eu quero cancelar o meu plano de internet",
        "preciso mudar a data de vencimento da conta",
        "gostaria de saber o valor da minha fatura deste mês",
        "quero fazer um upgrade do meu pacote de dados",
        "eu queria entender porque a conta veio mais cara este mês",
        "preciso atualizar o meu endereço de cobrança",
        "quero contratar o pacote de roaming internacional",
    };
    return pool;
}

const std::vector<std::string>& middle_pool() {
    static const std::vector<std::string> pool = {
        "o meu telefone é 62 99876-1234",
        "meu email é cliente@example.com",
        "aqui é o João falando",
        "a linha estava muito ruim ontem à noite",
        "já tentei reiniciar o modem duas vezes",
        "hum deixa eu ver um momento por favor",
        "o número da conta é 12345678",
        "a fatura chegou com um valor diferente do combinado",
    };
    return pool;
}

const std::vector<std::string>& closer_pool() {
    static const std::vector<std::string> pool = {
        "vou gerar a segunda via da fatura e enviar para o seu email cadastrado agora mesmo",
        "o cancelamento do plano foi registrado e será efetivado em até vinte e quatro horas",
        "a data de vencimento foi alterada para o dia dez de cada mês conforme solicitado",
        "o valor da fatura deste mês é de duzentos reais incluindo os serviços adicionais",
        "o upgrade do pacote de dados foi ativado e já está disponível na sua linha",
        "o endereço de cobrança foi atualizado no sistema e a próxima fatura já sai corrigida",
    };
    return pool;
}

std::vector<TranscriptSegment> synthesize_segments(const AudioClip& clip) {
    std::uint64_t state = fnv1a64(clip_digest(clip));
    const auto& openers = opener_pool();
    const auto& middles = middle_pool();
    const auto& closers = closer_pool();

    std::vector<std::string> texts;
    texts.push_back(openers[splitmix64(state) % openers.size()]);
    std::size_t n_mid = 2 + splitmix64(state) % 3;
    for (std::size_t i = 0; i < n_mid; ++i)
        texts.push_back(middles[splitmix64(state) % middles.size()]);
    texts.push_back(closers[splitmix64(state) % closers.size()]);

    double dur = clip.duration_s();
    double slot = dur / double(texts.size());
    std::vector<TranscriptSegment> out;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        TranscriptSegment seg;
        seg.start_s = slot * double(i) + slot * 0.05;
        seg.end_s = slot * double(i + 1) - slot * 0.05;
        seg.text = texts[i];
        seg.confidence = 0.9;
        out.push_back(std::move(seg));
    }
    return out;
}

void backoff_sleep(const RetryPolicy& policy, int attempt, std::uint64_t& jitter_state) {
    int delay = policy.base_delay_ms << attempt;
    delay += int(splitmix64(jitter_state) % std::uint64_t(policy.jitter_ceiling_ms + 1));
    std::this_thread::sleep_for(std::chrono::milliseconds(delay));
}

}  // namespace

std::vector<TranscriptSegment> MockAsrBackend::recognize(const AudioClip& clip) {
    auto it = fixtures_.find(clip_digest(clip));
    if (it != fixtures_.end()) return it->second;
    return synthesize_segments(clip);
}

std::vector<TranscriptSegment> CommandAsrBackend::recognize(const AudioClip& clip) {
    namespace fs = std::filesystem;
    std::uint64_t tag = fnv1a64(clip_digest(clip)) ^ std::uint64_t(std::random_device{}());
    fs::path wav_path = fs::temp_directory_path() / ("c2i_asr_" + to_hex(tag) + ".wav");
    fs::path out_path = fs::temp_directory_path() / ("c2i_asr_" + to_hex(tag) + ".json");
    write_file(wav_path.string(), encode_wav_pcm16(clip));

    std::string cmd = command_;
    std::size_t pos = cmd.find("{wav_path}");
    if (pos != std::string::npos)
        cmd.replace(pos, 10, wav_path.string());
    else
        cmd += " --audio " + wav_path.string();
    cmd += " > " + out_path.string();
    int rc = std::system(cmd.c_str());

    std::string output;
    try { output = read_file(out_path.string()); } catch (...) {}
    std::error_code ec;
    fs::remove(wav_path, ec);
    fs::remove(out_path, ec);
    if (rc != 0)
        throw PipelineError("ASR command failed with status " + std::to_string(rc));
    return parse_external_asr_output(output);
}

std::vector<TranscriptSegment> HttpAsrBackend::recognize(const AudioClip& clip) {
    std::string host, path;
    std::size_t scheme = endpoint_.find("://");
    std::size_t slash = endpoint_.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (slash == std::string::npos) {
        host = endpoint_;
        path = "/";
    } else {
        host = endpoint_.substr(0, slash);
        path = endpoint_.substr(slash);
    }
    std::string wav = encode_wav_pcm16(clip);
    std::uint64_t jitter_state = retry_.jitter_seed;
    std::string last_error;
    for (int attempt = 0; attempt < retry_.max_attempts; ++attempt) {
        if (attempt > 0) backoff_sleep(retry_, attempt - 1, jitter_state);
        httplib::Client client(host);
        auto res = client.Post(path, wav, "audio/wav");
        if (!res) {
            last_error = "connection failure";
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP status " + std::to_string(res->status);
            continue;
        }
        return parse_external_asr_output(res->body);
    }
    throw PipelineError("ASR backend unreachable after " + std::to_string(retry_.max_attempts) +
                        " attempts: " + last_error);
}

std::vector<TranscriptSegment> transcribe(const AudioClip& clip, Speaker speaker,
                                          AsrBackend& backend) {
    if (clip.samples.size() == 0 || clip.sample_rate_hz <= 0)
        throw PipelineError("transcribe: clip has zero duration");
    auto segments = backend.recognize(clip);
    double dur = clip.duration_s();
    std::vector<TranscriptSegment> out;
    for (auto seg : segments) {
        seg.speaker = speaker;
        seg.start_s = std::clamp(seg.start_s, 0.0, dur);
        seg.end_s = std::clamp(seg.end_s, 0.0, dur);
        if (seg.end_s <= seg.start_s || trim(seg.text).empty()) continue;
        out.push_back(std::move(seg));
    }
    return out;
}

}  // namespace c2i
