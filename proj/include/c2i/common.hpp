#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace c2i {

inline constexpr const char* kPipelineVersion = "c2i-0.1.0";

// Error with a stable category so the CLI can map failures to exit codes.
class PipelineError : public std::runtime_error {
public:
    explicit PipelineError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

class ConfigError : public PipelineError {
public:
    explicit ConfigError(std::string msg) : PipelineError(std::move(msg)) {}
};

// FNV-1a 64-bit. Used for artifact digests, mock keying and PII audit hashes.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t fnv1a64_bytes(const void* data, std::size_t n,
                                   std::uint64_t seed = 0xcbf29ce484222325ull) {
    return fnv1a64(std::string_view(static_cast<const char*>(data), n), seed);
}

std::string to_hex(std::uint64_t v);

// splitmix64: cheap deterministic expansion of a 64-bit seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Uniform double in [0, 1) from a splitmix stream.
inline double splitmix_unit(std::uint64_t& state) {
    return double(splitmix64(state) >> 11) * 0x1.0p-53;
}

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split_ws(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool starts_with(std::string_view s, std::string_view prefix);

// Token with leading/trailing punctuation stripped, lowercased. Empty if all punctuation.
std::string strip_punct_lower(std::string_view token);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace c2i
