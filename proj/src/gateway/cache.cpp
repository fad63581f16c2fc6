#include "nf/gateway/cache.h"

#include <chrono>
#include <fstream>

#include <nlohmann/json.hpp>

namespace nf::gateway {

namespace fs = std::filesystem;
using json = nlohmann::json;

DiskCache::DiskCache(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
}

fs::path DiskCache::entry_path(const std::string& key) const {
    return dir_ / (key + ".json");
}

std::optional<std::string> DiskCache::get(const std::string& key) const {
    std::ifstream in(entry_path(key));
    if (!in.is_open()) return std::nullopt;
    json entry = json::parse(in, nullptr, false);
    if (entry.is_discarded() || !entry.contains("response") || !entry["response"].is_string()) {
        return std::nullopt;
    }
    return entry["response"].get<std::string>();
}

void DiskCache::put(const std::string& key, const std::string& response) const {
    json entry = {
        {"key", key},
        {"created_at",
         std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
             .count()},
        {"response", response},
    };
    fs::path final_path = entry_path(key);
    fs::path tmp = final_path;
    tmp += ".tmp" + std::to_string(
                        std::chrono::steady_clock::now().time_since_epoch().count() % 1000000);
    {
        std::ofstream out(tmp);
        out << entry.dump();
    }
    std::error_code ec;
    fs::rename(tmp, final_path, ec);
    if (ec) fs::remove(tmp, ec);
}

size_t DiskCache::entry_count() const {
    size_t n = 0;
    std::error_code ec;
    for (auto it = fs::directory_iterator(dir_, ec); !ec && it != fs::directory_iterator(); ++it) {
        if (it->path().extension() == ".json") ++n;
    }
    return n;
}

}  // namespace nf::gateway
