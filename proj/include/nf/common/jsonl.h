#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include <nlohmann/json.hpp>

#include "nf/common/result.h"

namespace nf::jsonl {

using json = nlohmann::json;

struct ReadStats {
    size_t lines = 0;
    size_t parsed = 0;
    size_t parse_errors = 0;
    size_t empty = 0;
};

// Streams a JSONL file line by line. `on_record` receives the 1-based line
// number and the parsed object. Unparseable lines are counted, not fatal.
// A missing/unreadable file is fatal.
Result<ReadStats> for_each(const std::filesystem::path& path,
                           const std::function<void(size_t, const json&)>& on_record);

class Writer {
public:
    explicit Writer(const std::filesystem::path& path);
    ~Writer();

    Writer(const Writer&) = delete;
    Writer& operator=(const Writer&) = delete;

    bool ok() const;
    // One record per line, flushed per write so lines land atomically enough
    // for append-only logs.
    void write(const json& record);
    void write_raw(const std::string& line);
    size_t written() const { return written_; }

private:
    struct Impl;
    Impl* impl_;
    size_t written_ = 0;
};

}  // namespace nf::jsonl
