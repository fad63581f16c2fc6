#include "nf/gateway/client.h"

#include <cstdlib>
#include <thread>

#include "nf/common/digest.h"

namespace nf::gateway {

using json = nlohmann::json;

const char* role_name(ModelRole role) {
    switch (role) {
        case ModelRole::creator: return "creator";
        case ModelRole::selector: return "selector";
        case ModelRole::grader: return "grader";
        case ModelRole::forecaster: return "forecaster";
        case ModelRole::embedder: return "embedder";
    }
    return "unknown";
}

std::optional<ModelRole> role_from_name(const std::string& name) {
    if (name == "creator") return ModelRole::creator;
    if (name == "selector") return ModelRole::selector;
    if (name == "grader") return ModelRole::grader;
    if (name == "forecaster") return ModelRole::forecaster;
    if (name == "embedder") return ModelRole::embedder;
    return std::nullopt;
}

json SamplingParams::to_json() const {
    json j = json::object();
    if (temperature) j["temperature"] = *temperature;
    if (max_tokens) j["max_tokens"] = *max_tokens;
    if (seed) j["seed"] = *seed;
    return j;
}

SamplingParams SamplingParams::merged_with(const SamplingParams& overrides) const {
    SamplingParams out = *this;
    if (overrides.temperature) out.temperature = overrides.temperature;
    if (overrides.max_tokens) out.max_tokens = overrides.max_tokens;
    if (overrides.seed) out.seed = overrides.seed;
    return out;
}

Client::Client(ModelRole role, RoleConfig config, std::shared_ptr<Transport> transport,
               std::shared_ptr<DiskCache> cache, ClientOptions options)
    : role_(role),
      config_(std::move(config)),
      transport_(std::move(transport)),
      cache_(std::move(cache)),
      options_(options) {}

std::string Client::completion_cache_key(const std::string& model, const std::string& prompt,
                                         const SamplingParams& params) {
    json key = {{"kind", "chat"}, {"model", model}, {"params", params.to_json()}, {"prompt", prompt}};
    return sha256_hex(key.dump());
}

std::string Client::embedding_cache_key(const std::string& model, const std::string& text) {
    json key = {{"kind", "embed"}, {"model", model}, {"text", text}};
    return sha256_hex(key.dump());
}

Result<std::string> Client::perform(const std::string& path, const std::string& body) const {
    std::vector<Header> headers;
    if (!config_.api_key_env.empty()) {
        if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
            headers.emplace_back("Authorization", std::string("Bearer ") + key);
        }
    }

    std::string attempt_log;
    for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
        if (attempt > 1 && options_.backoff_base_ms > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(options_.backoff_base_ms << (attempt - 2)));
        }
        auto res = transport_->post(config_.endpoint, path, body, headers);
        if (!res.ok()) {
            attempt_log += "attempt " + std::to_string(attempt) + ": " + res.error() + "; ";
            continue;
        }
        int status = res.value().status;
        if (status >= 200 && status < 300) {
            return std::move(res).take().body;
        }
        if (status == 429 || status >= 500) {
            attempt_log += "attempt " + std::to_string(attempt) + ": HTTP " +
                           std::to_string(status) + "; ";
            continue;
        }
        // Remaining 4xx are caller errors; retrying cannot help.
        return Result<std::string>::failure("HTTP " + std::to_string(status) + " from " +
                                            role_name(role_) + " endpoint: " +
                                            res.value().body.substr(0, 512));
    }
    return Result<std::string>::failure("exhausted " + std::to_string(options_.max_attempts) +
                                        " attempts for " + role_name(role_) + ": " + attempt_log);
}

Result<std::string> Client::complete(const std::string& prompt) const {
    return complete(prompt, SamplingParams{});
}

Result<std::string> Client::complete(const std::string& prompt,
                                     const SamplingParams& overrides) const {
    SamplingParams params = config_.params.merged_with(overrides);
    const std::string key = completion_cache_key(config_.model, prompt, params);
    if (cache_) {
        if (auto hit = cache_->get(key)) return *hit;
    }
    if (options_.replay_only) {
        return Result<std::string>::failure(std::string("replay-only cache miss for role ") +
                                            role_name(role_));
    }

    json body = {{"model", config_.model},
                 {"messages", json::array({{{"role", "user"}, {"content", prompt}}})}};
    if (params.temperature) body["temperature"] = *params.temperature;
    if (params.max_tokens) body["max_tokens"] = *params.max_tokens;
    if (params.seed) body["seed"] = *params.seed;

    auto raw = perform("/v1/chat/completions", body.dump());
    if (!raw.ok()) return raw;

    json response = json::parse(raw.value(), nullptr, false);
    if (response.is_discarded() || !response.contains("choices") || response["choices"].empty() ||
        !response["choices"][0].contains("message") ||
        !response["choices"][0]["message"].contains("content") ||
        !response["choices"][0]["message"]["content"].is_string()) {
        return Result<std::string>::failure("malformed completion response: " +
                                            raw.value().substr(0, 512));
    }
    std::string content = response["choices"][0]["message"]["content"].get<std::string>();
    if (cache_) cache_->put(key, content);
    return content;
}

Result<std::vector<std::vector<double>>> Client::embed(
    const std::vector<std::string>& texts) const {
    using Vectors = std::vector<std::vector<double>>;
    Vectors out(texts.size());
    std::vector<size_t> misses;

    for (size_t i = 0; i < texts.size(); ++i) {
        if (!cache_) {
            misses.push_back(i);
            continue;
        }
        auto hit = cache_->get(embedding_cache_key(config_.model, texts[i]));
        if (!hit) {
            misses.push_back(i);
            continue;
        }
        json vec = json::parse(*hit, nullptr, false);
        if (vec.is_discarded() || !vec.is_array()) {
            misses.push_back(i);
            continue;
        }
        out[i] = vec.get<std::vector<double>>();
    }

    if (!misses.empty() && options_.replay_only) {
        return Result<Vectors>::failure("replay-only cache miss for embedder");
    }

    for (size_t batch_start = 0; batch_start < misses.size();
         batch_start += static_cast<size_t>(options_.embed_batch_size)) {
        size_t batch_end = std::min(misses.size(),
                                    batch_start + static_cast<size_t>(options_.embed_batch_size));
        json input = json::array();
        for (size_t b = batch_start; b < batch_end; ++b) input.push_back(texts[misses[b]]);
        json body = {{"model", config_.model}, {"input", input}};

        auto raw = perform("/v1/embeddings", body.dump());
        if (!raw.ok()) return Result<Vectors>::failure(raw.error());
        json response = json::parse(raw.value(), nullptr, false);
        if (response.is_discarded() || !response.contains("data") || !response["data"].is_array() ||
            response["data"].size() != batch_end - batch_start) {
            return Result<Vectors>::failure("malformed embeddings response");
        }
        for (size_t b = batch_start; b < batch_end; ++b) {
            const json& item = response["data"][b - batch_start];
            if (!item.contains("embedding") || !item["embedding"].is_array()) {
                return Result<Vectors>::failure("malformed embeddings response entry");
            }
            size_t target = item.contains("index") && item["index"].is_number_unsigned()
                                ? misses[batch_start + item["index"].get<size_t>()]
                                : misses[b];
            out[target] = item["embedding"].get<std::vector<double>>();
            if (cache_) {
                cache_->put(embedding_cache_key(config_.model, texts[target]),
                            item["embedding"].dump());
            }
        }
    }

    size_t dim = 0;
    for (const auto& v : out) {
        if (v.empty()) return Result<Vectors>::failure("embedder returned an empty vector");
        if (dim == 0) dim = v.size();
        if (v.size() != dim) {
            return Result<Vectors>::failure("embedding dimension mismatch across batch: " +
                                            std::to_string(dim) + " vs " +
                                            std::to_string(v.size()));
        }
    }
    return out;
}

}  // namespace nf::gateway
