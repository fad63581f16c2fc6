#pragma once

// Shared helpers for the test suites: scripted transports that speak the
// OpenAI wire shapes, deterministic embeddings, and scratch directories.

#include <unistd.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nf/common/digest.h"
#include "nf/gateway/cache.h"
#include "nf/gateway/client.h"
#include "nf/gateway/transport.h"

namespace nftest {

using json = nlohmann::json;

using CompleteFn = std::function<std::string(const std::string& prompt)>;
using EmbedFn = std::function<std::vector<double>(const std::string& text)>;

// Wraps prompt->text and text->vector functions as an OpenAI-compatible
// endpoint behind a FakeTransport.
inline std::shared_ptr<nf::gateway::FakeTransport> mock_transport(CompleteFn complete,
                                                                  EmbedFn embed = nullptr) {
    auto handler = [complete = std::move(complete), embed = std::move(embed)](
                       const std::string& path,
                       const std::string& body) -> nf::Result<nf::gateway::HttpResponse> {
        json req = json::parse(body, nullptr, false);
        if (req.is_discarded()) {
            return nf::gateway::HttpResponse{400, "{\"error\":\"bad request\"}"};
        }
        if (path == "/v1/chat/completions") {
            if (!complete) return nf::gateway::HttpResponse{500, "no completion handler"};
            std::string prompt = req["messages"][0]["content"].get<std::string>();
            json res = {{"choices", json::array({{{"message",
                                                   {{"role", "assistant"},
                                                    {"content", complete(prompt)}}}}})}};
            return nf::gateway::HttpResponse{200, res.dump()};
        }
        if (path == "/v1/embeddings") {
            if (!embed) return nf::gateway::HttpResponse{500, "no embed handler"};
            json data = json::array();
            size_t i = 0;
            for (const auto& text : req["input"]) {
                data.push_back(
                    {{"embedding", embed(text.get<std::string>())}, {"index", i++}});
            }
            return nf::gateway::HttpResponse{200, json{{"data", data}}.dump()};
        }
        return nf::gateway::HttpResponse{404, "unknown path"};
    };
    return std::make_shared<nf::gateway::FakeTransport>(std::move(handler));
}

// Like mock_transport, but the completion handler also sees the sampling seed
// from the request (how evaluation attempts are told apart).
using CompleteSeedFn = std::function<std::string(const std::string& prompt, long long seed)>;

inline std::shared_ptr<nf::gateway::FakeTransport> mock_transport_seeded(CompleteSeedFn complete) {
    auto handler = [complete = std::move(complete)](
                       const std::string& path,
                       const std::string& body) -> nf::Result<nf::gateway::HttpResponse> {
        if (path != "/v1/chat/completions") {
            return nf::gateway::HttpResponse{404, "unknown path"};
        }
        json req = json::parse(body, nullptr, false);
        std::string prompt = req["messages"][0]["content"].get<std::string>();
        long long seed = req.value("seed", 0LL);
        json res = {{"choices",
                     json::array({{{"message",
                                    {{"role", "assistant"}, {"content", complete(prompt, seed)}}}}})}};
        return nf::gateway::HttpResponse{200, res.dump()};
    };
    return std::make_shared<nf::gateway::FakeTransport>(std::move(handler));
}

// Deterministic pseudo-embedding: seeded from the text digest, stable across
// processes and runs.
inline std::vector<double> hash_embedding(const std::string& text, size_t dim = 16) {
    std::string digest = nf::sha256_hex(text);
    uint64_t seed = 0;
    for (size_t i = 0; i < 16 && i < digest.size(); ++i) {
        seed = seed * 16 + static_cast<uint64_t>(digest[i] <= '9' ? digest[i] - '0'
                                                                  : digest[i] - 'a' + 10);
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(dim);
    for (auto& x : v) x = dist(rng);
    return v;
}

inline nf::gateway::Client make_mock_client(nf::gateway::ModelRole role,
                                            std::shared_ptr<nf::gateway::Transport> transport,
                                            std::shared_ptr<nf::gateway::DiskCache> cache = nullptr,
                                            const std::string& model = "mock-model",
                                            nf::gateway::ClientOptions options = {}) {
    nf::gateway::RoleConfig rc;
    rc.model = model;
    rc.endpoint = "http://mock.invalid";
    rc.api_key_env = "";
    options.backoff_base_ms = 0;  // tests never sleep
    return nf::gateway::Client(role, rc, std::move(transport), std::move(cache), options);
}

// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() /
               ("nf_test_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::filesystem::path repo_dir() { return std::filesystem::path(NF_REPO_DIR); }
inline std::filesystem::path templates_dir() { return repo_dir() / "templates"; }

}  // namespace nftest
