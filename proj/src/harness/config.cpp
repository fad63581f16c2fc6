#include "nf/harness/config.h"

#include <stdexcept>

#include <yaml-cpp/yaml.h>

namespace nf::harness {

namespace {

gateway::RoleConfig parse_role(const YAML::Node& node) {
    gateway::RoleConfig rc;
    rc.model = node["model"] ? node["model"].as<std::string>() : "";
    rc.endpoint = node["endpoint"] ? node["endpoint"].as<std::string>() : "";
    if (node["temperature"]) rc.params.temperature = node["temperature"].as<double>();
    if (node["max_tokens"]) rc.params.max_tokens = node["max_tokens"].as<int>();
    if (node["api_key_env"]) rc.api_key_env = node["api_key_env"].as<std::string>();
    return rc;
}

}  // namespace

Config Config::load(const std::filesystem::path& path) {
    YAML::Node root = YAML::LoadFile(path.string());
    Config cfg;

    if (root["cache_dir"]) cfg.cache_dir = root["cache_dir"].as<std::string>();
    if (root["templates_dir"]) cfg.templates_dir = root["templates_dir"].as<std::string>();
    if (root["seed"]) cfg.seed = root["seed"].as<uint64_t>();
    if (root["replay_only"]) cfg.replay_only = root["replay_only"].as<bool>();
    if (root["strict"]) cfg.strict = root["strict"].as<bool>();

    if (root["roles"]) {
        for (const auto& kv : root["roles"]) {
            auto role = gateway::role_from_name(kv.first.as<std::string>());
            if (!role) {
                throw std::runtime_error("config: unknown role " + kv.first.as<std::string>());
            }
            cfg.roles[*role] = parse_role(kv.second);
        }
    }

    if (const auto& r = root["retrieval"]) {
        if (r["k"]) cfg.retrieval.k = r["k"].as<int>();
        if (r["chunk_tokens"]) cfg.retrieval.chunk_tokens = r["chunk_tokens"].as<int>();
        if (r["cutoff_date_field"]) {
            cfg.retrieval.cutoff_date_field = r["cutoff_date_field"].as<std::string>();
        }
        if (cfg.retrieval.k < 1) throw std::runtime_error("config: retrieval.k must be >= 1");
        if (cfg.retrieval.chunk_tokens < 1) {
            throw std::runtime_error("config: retrieval.chunk_tokens must be >= 1");
        }
    }
    if (auto it = cfg.roles.find(gateway::ModelRole::embedder); it != cfg.roles.end()) {
        cfg.retrieval.embed_model = it->second.model;
    }

    if (const auto& p = root["pipeline"]) {
        if (p["questions_per_article"]) {
            cfg.pipeline.questions_per_article = p["questions_per_article"].as<int>();
        }
        if (p["resolution_threshold"]) {
            auto d = Date::parse_iso(p["resolution_threshold"].as<std::string>());
            if (!d) throw std::runtime_error("config: bad pipeline.resolution_threshold");
            cfg.pipeline.resolution_threshold = *d;
        }
        if (p["token_leak_check"]) cfg.pipeline.token_leak_check = p["token_leak_check"].as<bool>();
        if (p["workers"]) cfg.pipeline.workers = p["workers"].as<int>();
    }

    if (const auto& e = root["evaluate"]) {
        if (e["attempts_per_sample"]) {
            cfg.eval.attempts_per_sample = e["attempts_per_sample"].as<int>();
        }
        if (e["with_retrieval"]) cfg.eval.with_retrieval = e["with_retrieval"].as<bool>();
        if (e["calibration_bins"]) cfg.eval.calibration_bins = e["calibration_bins"].as<size_t>();
        if (e["workers"]) cfg.eval.workers = e["workers"].as<int>();
    }

    if (const auto& w = root["reward"]) {
        if (w["mode"]) cfg.reward.mode = w["mode"].as<std::string>();
        if (w["group_size"]) cfg.reward.group_size = w["group_size"].as<int>();
        if (w["max_chunks"]) cfg.reward.max_chunks = w["max_chunks"].as<int>();
    }

    if (const auto& i = root["ingest"]) {
        corpus::FieldMapping m;
        if (i["url"]) m.url = i["url"].as<std::string>();
        if (i["date"]) m.date = i["date"].as<std::string>();
        if (i["title"]) m.title = i["title"].as<std::string>();
        if (i["body"]) m.body = i["body"].as<std::string>();
        if (i["language"]) m.language = i["language"].as<std::string>();
        if (i["source"]) m.source = i["source"].as<std::string>();
        if (i["default_language"]) m.default_language = i["default_language"].as<std::string>();
        cfg.ingest_mapping = m;
    }
    return cfg;
}

gateway::ClientOptions Config::client_options() const {
    gateway::ClientOptions opts;
    opts.replay_only = replay_only;
    return opts;
}

gateway::Client Config::make_client(gateway::ModelRole role,
                                    std::shared_ptr<gateway::Transport> transport,
                                    std::shared_ptr<gateway::DiskCache> cache) const {
    auto it = roles.find(role);
    if (it == roles.end()) {
        throw std::runtime_error(std::string("config: role not bound: ") +
                                 gateway::role_name(role));
    }
    return gateway::Client(role, it->second, std::move(transport), std::move(cache),
                           client_options());
}

}  // namespace nf::harness
