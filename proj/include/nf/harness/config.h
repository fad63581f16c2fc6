#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "nf/corpus/ingest.h"
#include "nf/gateway/client.h"
#include "nf/qgen/pipeline.h"
#include "nf/retrieval/chunker.h"

namespace nf::harness {

struct EvalSettings {
    int attempts_per_sample = 1;
    bool with_retrieval = false;
    size_t calibration_bins = 10;
    int workers = 1;
};

struct RewardSettings {
    std::string mode = "accuracy_plus_brier";
    int group_size = 4;
    int max_chunks = 5;
};

// Everything a run needs, loaded from one commented YAML file. CLI flags
// override the loaded values.
struct Config {
    std::filesystem::path cache_dir = ".nf_cache";
    std::filesystem::path templates_dir = "templates";
    uint64_t seed = 42;
    bool replay_only = false;
    bool strict = false;

    std::map<gateway::ModelRole, gateway::RoleConfig> roles;
    retrieval::RetrievalConfig retrieval;
    qgen::PipelineConfig pipeline;
    EvalSettings eval;
    RewardSettings reward;
    corpus::FieldMapping ingest_mapping;

    static Config load(const std::filesystem::path& path);

    // Binds one role; throws std::runtime_error when the role is not
    // configured. Every invocation binds each needed role exactly once.
    gateway::Client make_client(gateway::ModelRole role,
                                std::shared_ptr<gateway::Transport> transport,
                                std::shared_ptr<gateway::DiskCache> cache) const;

    gateway::ClientOptions client_options() const;
};

}  // namespace nf::harness
