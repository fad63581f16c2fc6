#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nf/common/date.h"
#include "nf/common/result.h"
#include "nf/gateway/client.h"
#include "nf/retrieval/chunker.h"

namespace nf::retrieval {

struct ArticleMeta {
    std::string title;
    std::string source;
    std::string url;
    Date publish_date;
};

struct Hit {
    size_t chunk_index = 0;
    double score = 0.0;  // cosine similarity in [-1,1]
};

// Write-once exact-cosine index. Embeddings are stored L2-normalized as
// float32; queries are a full scan with a temporal gate, so results never
// include a chunk published after the cutoff. No ANN — corpora here are small
// enough that exact search is both simpler and the correctness baseline.
class Index {
public:
    Index() = default;

    // Embeds any chunk with an empty embedding via the embedder role, in
    // bounded batches. On embedder failure the build aborts; vectors already
    // embedded remain in the gateway cache as the resume checkpoint.
    static Result<Index> build(std::vector<Chunk> chunks,
                               std::map<std::string, ArticleMeta> articles,
                               const gateway::Client& embedder);

    // For tests and offline files: all chunks must already carry embeddings.
    static Result<Index> from_embedded(std::vector<Chunk> chunks,
                                       std::map<std::string, ArticleMeta> articles);

    size_t size() const { return chunks_.size(); }
    size_t dimension() const { return dimension_; }
    bool empty() const { return chunks_.empty(); }

    // Top-k by cosine similarity among chunks with publish_date <= cutoff.
    // Ties break by (publish_date desc, chunk_id asc). Fewer than k results
    // means fewer eligible chunks exist.
    Result<std::vector<Hit>> query(const std::string& question_text, const Date& cutoff, int k,
                                   const gateway::Client& embedder) const;
    std::vector<Hit> query_embedded(std::span<const float> query_vector, const Date& cutoff,
                                    int k) const;

    const Chunk& chunk(size_t i) const { return chunks_[i]; }
    const std::vector<Chunk>& chunks() const { return chunks_; }
    const ArticleMeta* article(const std::string& article_id) const;

    // Versioned binary file (magic/version/dimension/count + float32 rows)
    // plus a JSON sidecar "<path>.meta.json" with chunk and article metadata.
    Status save(const std::filesystem::path& path) const;
    static Result<Index> load(const std::filesystem::path& path);

private:
    void normalize_all();

    std::vector<Chunk> chunks_;
    std::map<std::string, ArticleMeta> articles_;
    size_t dimension_ = 0;
};

}  // namespace nf::retrieval
