#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <unordered_set>
#include <vector>

#include "nf/common/result.h"
#include "nf/corpus/article.h"

namespace nf::corpus {

// Maps source-specific JSONL field names onto Article fields. `language` and
// `source` may be empty (derived / defaulted).
struct FieldMapping {
    std::string url = "url";
    std::string date = "date";
    std::string title = "title";
    std::string body = "body";
    std::string language;
    std::string source;
    std::string default_language = "en";

    static FieldMapping from_json(const nlohmann::json& j);
};

struct IngestCounters {
    size_t lines = 0;
    size_t yielded = 0;
    std::map<std::string, size_t> skipped;  // reason code -> count

    size_t total_skipped() const;
};

// Streams normalized Articles out of a JSONL file. Records violating the
// schema are skipped and counted by reason; an unreadable file is fatal.
Result<IngestCounters> ingest(const std::filesystem::path& path, const FieldMapping& mapping,
                              const std::function<void(Article&&)>& sink);

Result<std::vector<Article>> ingest_all(const std::filesystem::path& path,
                                        const FieldMapping& mapping,
                                        IngestCounters* counters = nullptr);

// Reads articles already in the normalized output schema (as written by the
// ingest step), no field remapping.
Result<std::vector<Article>> load_articles(const std::filesystem::path& path);

// Order-stable duplicate suppression: first occurrence by url wins, then by
// content hash of the canonicalized title+body. Safe to share across shards.
class Deduper {
public:
    // True if the article is a first occurrence (caller keeps it).
    bool admit(const Article& a);

    size_t url_duplicates() const { return url_dups_; }
    size_t content_duplicates() const { return content_dups_; }

private:
    std::mutex mu_;
    std::unordered_set<std::string> urls_;
    std::unordered_set<std::string> content_hashes_;
    size_t url_dups_ = 0;
    size_t content_dups_ = 0;
};

std::vector<Article> dedup(const std::vector<Article>& articles);

// Inclusive [start, end] window plus language match (primary subtag,
// case-insensitive). Throws std::invalid_argument if start > end.
std::vector<Article> filter_window(const std::vector<Article>& articles, const Date& start,
                                   const Date& end, const std::string& language);

bool in_window(const Article& a, const Date& start, const Date& end, const std::string& language);

}  // namespace nf::corpus
