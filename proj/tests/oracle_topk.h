#pragma once

// Independent brute-force oracle for cosine top-k with the temporal gate and
// the (score desc, publish_date desc, chunk_id asc) tie rule. Deliberately a
// separate implementation from the index: it normalizes its own copies of the
// raw vectors and ranks with a full stable sort instead of a heap.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nf/common/date.h"

namespace nftest {

struct OracleChunk {
    std::string chunk_id;
    nf::Date publish_date;
    std::vector<double> raw_embedding;
};

struct OracleHit {
    std::string chunk_id;
    double score;
};

// float32 quantization happens before normalization, matching the index's
// storage contract (vectors arrive as float32 rows).
inline std::vector<float> oracle_normalize(const std::vector<double>& raw) {
    std::vector<float> quantized(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) quantized[i] = static_cast<float>(raw[i]);
    double norm_sq = 0.0;
    for (float x : quantized) norm_sq += static_cast<double>(x) * static_cast<double>(x);
    double inv = 1.0 / std::sqrt(norm_sq);
    std::vector<float> out(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
        out[i] = static_cast<float>(static_cast<double>(quantized[i]) * inv);
    }
    return out;
}

inline std::vector<OracleHit> oracle_topk(const std::vector<OracleChunk>& chunks,
                                          const std::vector<double>& raw_query,
                                          const nf::Date& cutoff, size_t k) {
    std::vector<float> q = oracle_normalize(raw_query);

    struct Scored {
        size_t idx;
        double score;
    };
    std::vector<Scored> eligible;
    for (size_t i = 0; i < chunks.size(); ++i) {
        if (cutoff < chunks[i].publish_date) continue;
        std::vector<float> e = oracle_normalize(chunks[i].raw_embedding);
        double dot = 0.0;
        for (size_t d = 0; d < e.size(); ++d) {
            dot += static_cast<double>(e[d]) * static_cast<double>(q[d]);
        }
        eligible.push_back({i, dot});
    }
    std::sort(eligible.begin(), eligible.end(), [&](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        if (chunks[a.idx].publish_date != chunks[b.idx].publish_date) {
            return chunks[b.idx].publish_date < chunks[a.idx].publish_date;
        }
        return chunks[a.idx].chunk_id < chunks[b.idx].chunk_id;
    });
    if (eligible.size() > k) eligible.resize(k);

    std::vector<OracleHit> out;
    for (const auto& s : eligible) out.push_back({chunks[s.idx].chunk_id, s.score});
    return out;
}

}  // namespace nftest
