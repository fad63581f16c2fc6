#include "nf/retrieval/index.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <queue>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace nf::retrieval {

namespace {

using json = nlohmann::json;

constexpr char kMagic[4] = {'N', 'F', 'I', 'X'};
constexpr uint32_t kVersion = 1;

// Strictly-better ordering used for both ranking and tie-breaking.
struct HitOrder {
    const std::vector<Chunk>* chunks;
    bool better(const Hit& a, const Hit& b) const {
        if (a.score != b.score) return a.score > b.score;
        const Chunk& ca = (*chunks)[a.chunk_index];
        const Chunk& cb = (*chunks)[b.chunk_index];
        if (ca.publish_date != cb.publish_date) return cb.publish_date < ca.publish_date;
        return ca.chunk_id < cb.chunk_id;
    }
};

// Vectors are stored as float32, so quantize first and normalize over the
// quantized values; queries follow the same path as stored rows.
std::vector<float> normalize_to_float(const std::vector<double>& v) {
    std::vector<float> quantized(v.size());
    for (size_t i = 0; i < v.size(); ++i) quantized[i] = static_cast<float>(v[i]);
    double norm_sq = 0.0;
    for (float x : quantized) norm_sq += static_cast<double>(x) * static_cast<double>(x);
    if (!(norm_sq > 0.0) || !std::isfinite(norm_sq)) return {};
    double inv = 1.0 / std::sqrt(norm_sq);
    std::vector<float> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        out[i] = static_cast<float>(static_cast<double>(quantized[i]) * inv);
    }
    return out;
}

}  // namespace

void Index::normalize_all() {
    for (auto& c : chunks_) {
        std::vector<double> wide(c.embedding.begin(), c.embedding.end());
        c.embedding = normalize_to_float(wide);
    }
}

Result<Index> Index::build(std::vector<Chunk> chunks, std::map<std::string, ArticleMeta> articles,
                           const gateway::Client& embedder) {
    for (const auto& c : chunks) {
        if (c.text.empty()) {
            return Result<Index>::failure("cannot index empty chunk " + c.chunk_id);
        }
    }
    std::vector<size_t> pending;
    std::vector<std::string> texts;
    for (size_t i = 0; i < chunks.size(); ++i) {
        if (chunks[i].embedding.empty()) {
            pending.push_back(i);
            texts.push_back(chunks[i].text);
        }
    }
    if (!pending.empty()) {
        auto vectors = embedder.embed(texts);
        if (!vectors.ok()) {
            // Per-text embeddings already obtained live in the gateway cache,
            // so a rerun resumes instead of starting over.
            return Result<Index>::failure("index build aborted: " + vectors.error());
        }
        for (size_t j = 0; j < pending.size(); ++j) {
            const auto& v = vectors.value()[j];
            chunks[pending[j]].embedding.assign(v.begin(), v.end());
        }
    }
    return from_embedded(std::move(chunks), std::move(articles));
}

Result<Index> Index::from_embedded(std::vector<Chunk> chunks,
                                   std::map<std::string, ArticleMeta> articles) {
    Index idx;
    idx.chunks_ = std::move(chunks);
    idx.articles_ = std::move(articles);
    idx.normalize_all();
    for (const auto& c : idx.chunks_) {
        if (c.embedding.empty()) {
            return Result<Index>::failure("chunk " + c.chunk_id +
                                          " has a zero or non-finite embedding");
        }
        if (idx.dimension_ == 0) idx.dimension_ = c.embedding.size();
        if (c.embedding.size() != idx.dimension_) {
            return Result<Index>::failure("embedding dimension mismatch at " + c.chunk_id);
        }
        for (float x : c.embedding) {
            if (!std::isfinite(x)) {
                return Result<Index>::failure("non-finite embedding entry at " + c.chunk_id);
            }
        }
    }
    return idx;
}

const ArticleMeta* Index::article(const std::string& article_id) const {
    auto it = articles_.find(article_id);
    return it == articles_.end() ? nullptr : &it->second;
}

std::vector<Hit> Index::query_embedded(std::span<const float> query_vector, const Date& cutoff,
                                       int k) const {
    if (k < 1) throw std::invalid_argument("query: k must be >= 1");
    if (chunks_.empty()) return {};
    if (query_vector.size() != dimension_) {
        throw std::invalid_argument("query vector dimension mismatch");
    }

    HitOrder order{&chunks_};
    auto worse_on_top = [&order](const Hit& a, const Hit& b) { return order.better(a, b); };
    std::priority_queue<Hit, std::vector<Hit>, decltype(worse_on_top)> heap(worse_on_top);

    for (size_t i = 0; i < chunks_.size(); ++i) {
        const Chunk& c = chunks_[i];
        if (cutoff < c.publish_date) continue;  // temporal gate
        double score = 0.0;
        for (size_t d = 0; d < dimension_; ++d) {
            score += static_cast<double>(c.embedding[d]) * static_cast<double>(query_vector[d]);
        }
        Hit h{i, score};
        if (heap.size() < static_cast<size_t>(k)) {
            heap.push(h);
        } else if (order.better(h, heap.top())) {
            heap.pop();
            heap.push(h);
        }
    }

    std::vector<Hit> out;
    out.reserve(heap.size());
    while (!heap.empty()) {
        out.push_back(heap.top());
        heap.pop();
    }
    std::reverse(out.begin(), out.end());
    return out;
}

Result<std::vector<Hit>> Index::query(const std::string& question_text, const Date& cutoff, int k,
                                      const gateway::Client& embedder) const {
    if (chunks_.empty()) return std::vector<Hit>{};
    auto vectors = embedder.embed({question_text});
    if (!vectors.ok()) {
        return Result<std::vector<Hit>>::failure("query embedding failed: " + vectors.error());
    }
    std::vector<float> q = normalize_to_float(vectors.value()[0]);
    if (q.size() != dimension_) {
        return Result<std::vector<Hit>>::failure("query embedding dimension " +
                                                 std::to_string(q.size()) + " != index dimension " +
                                                 std::to_string(dimension_));
    }
    return query_embedded(q, cutoff, k);
}

Status Index::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out.is_open()) return Status::failure("cannot write " + path.string());

    uint32_t dim = static_cast<uint32_t>(dimension_);
    uint64_t count = chunks_.size();
    out.write(kMagic, 4);
    uint32_t version = kVersion;
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    out.write(reinterpret_cast<const char*>(&count), sizeof(count));
    for (const auto& c : chunks_) {
        out.write(reinterpret_cast<const char*>(c.embedding.data()),
                  static_cast<std::streamsize>(c.embedding.size() * sizeof(float)));
    }
    if (!out.good()) return Status::failure("short write to " + path.string());
    out.close();

    json meta;
    meta["chunks"] = json::array();
    for (const auto& c : chunks_) {
        meta["chunks"].push_back({{"chunk_id", c.chunk_id},
                                  {"article_id", c.article_id},
                                  {"publish_date", c.publish_date.iso()},
                                  {"text", c.text},
                                  {"token_count", c.token_count}});
    }
    meta["articles"] = json::object();
    for (const auto& [id, a] : articles_) {
        meta["articles"][id] = {{"title", a.title},
                                {"source", a.source},
                                {"url", a.url},
                                {"publish_date", a.publish_date.iso()}};
    }
    std::ofstream meta_out(path.string() + ".meta.json", std::ios::trunc);
    if (!meta_out.is_open()) return Status::failure("cannot write index sidecar");
    meta_out << meta.dump(2) << '\n';
    return Status::success();
}

Result<Index> Index::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open()) return Result<Index>::failure("cannot open " + path.string());

    char magic[4] = {};
    uint32_t version = 0, dim = 0;
    uint64_t count = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    if (!in.good() || std::memcmp(magic, kMagic, 4) != 0) {
        return Result<Index>::failure("not an index file: " + path.string());
    }
    if (version != kVersion) {
        return Result<Index>::failure("unsupported index version " + std::to_string(version));
    }

    std::ifstream meta_in(path.string() + ".meta.json");
    if (!meta_in.is_open()) return Result<Index>::failure("missing index sidecar");
    json meta = json::parse(meta_in, nullptr, false);
    if (meta.is_discarded() || !meta.contains("chunks") || meta["chunks"].size() != count) {
        return Result<Index>::failure("index sidecar is corrupt or inconsistent");
    }

    Index idx;
    idx.dimension_ = dim;
    idx.chunks_.reserve(count);
    for (const auto& cj : meta["chunks"]) {
        Chunk c;
        c.chunk_id = cj.value("chunk_id", "");
        c.article_id = cj.value("article_id", "");
        if (auto d = Date::parse_iso(cj.value("publish_date", ""))) c.publish_date = *d;
        c.text = cj.value("text", "");
        c.token_count = cj.value("token_count", 0);
        c.embedding.resize(dim);
        in.read(reinterpret_cast<char*>(c.embedding.data()),
                static_cast<std::streamsize>(dim * sizeof(float)));
        if (!in.good()) return Result<Index>::failure("truncated index file");
        idx.chunks_.push_back(std::move(c));
    }
    if (meta.contains("articles")) {
        for (const auto& [id, aj] : meta["articles"].items()) {
            ArticleMeta a;
            a.title = aj.value("title", "");
            a.source = aj.value("source", "");
            a.url = aj.value("url", "");
            if (auto d = Date::parse_iso(aj.value("publish_date", ""))) a.publish_date = *d;
            idx.articles_[id] = a;
        }
    }
    return idx;
}

}  // namespace nf::retrieval
