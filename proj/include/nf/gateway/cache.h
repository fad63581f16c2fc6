#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace nf::gateway {

// Content-addressed response cache: one file per key digest under the cache
// directory. Reads are lock-free; writes go through a temp file and rename so
// concurrent writers of the same key are safe.
class DiskCache {
public:
    explicit DiskCache(std::filesystem::path dir);

    std::optional<std::string> get(const std::string& key) const;
    void put(const std::string& key, const std::string& response) const;

    const std::filesystem::path& dir() const { return dir_; }
    size_t entry_count() const;

private:
    std::filesystem::path entry_path(const std::string& key) const;
    std::filesystem::path dir_;
};

}  // namespace nf::gateway
