#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nf/common/result.h"
#include "nf/gateway/cache.h"
#include "nf/gateway/transport.h"

namespace nf::gateway {

enum class ModelRole { creator, selector, grader, forecaster, embedder };

const char* role_name(ModelRole role);
std::optional<ModelRole> role_from_name(const std::string& name);

struct SamplingParams {
    std::optional<double> temperature;
    std::optional<int> max_tokens;
    std::optional<long long> seed;

    nlohmann::json to_json() const;  // canonical: unset fields omitted
    SamplingParams merged_with(const SamplingParams& overrides) const;
};

struct RoleConfig {
    std::string model;
    std::string endpoint;  // base URL of an OpenAI-compatible server
    SamplingParams params;
    std::string api_key_env = "NF_API_KEY";  // credentials come from env only
};

struct ClientOptions {
    int max_attempts = 3;
    int backoff_base_ms = 500;  // doubled per retry; 0 disables sleeping
    bool replay_only = false;   // cache misses become hard errors
    int embed_batch_size = 64;
};

// One model role behind an OpenAI-compatible endpoint, with disk caching and
// bounded retries. Cache keys cover (kind, model, prompt, params) so changed
// sampling settings never alias.
class Client {
public:
    Client(ModelRole role, RoleConfig config, std::shared_ptr<Transport> transport,
           std::shared_ptr<DiskCache> cache, ClientOptions options = {});

    Result<std::string> complete(const std::string& prompt) const;
    Result<std::string> complete(const std::string& prompt, const SamplingParams& overrides) const;

    // One vector per input text, in order, all of equal dimension. Requests
    // are batched; each text is cached individually.
    Result<std::vector<std::vector<double>>> embed(const std::vector<std::string>& texts) const;

    static std::string completion_cache_key(const std::string& model, const std::string& prompt,
                                            const SamplingParams& params);
    static std::string embedding_cache_key(const std::string& model, const std::string& text);

    ModelRole role() const { return role_; }
    const RoleConfig& config() const { return config_; }
    const ClientOptions& options() const { return options_; }
    Transport* transport() const { return transport_.get(); }

private:
    Result<std::string> perform(const std::string& path, const std::string& body) const;

    ModelRole role_;
    RoleConfig config_;
    std::shared_ptr<Transport> transport_;
    std::shared_ptr<DiskCache> cache_;
    ClientOptions options_;
};

}  // namespace nf::gateway
