#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nf/common/date.h"
#include "nf/corpus/article.h"

namespace nf::retrieval {

struct Chunk {
    std::string chunk_id;    // "<article_id>#<n>"
    std::string article_id;
    Date publish_date;       // copied from the parent article
    std::string text;
    int token_count = 0;
    std::vector<float> embedding;  // empty until indexed; L2-normalized in the index
};

// Token counting is pluggable; the chunk contracts hold for any tokenizer
// that round-trips through detokenize.
class Tokenizer {
public:
    virtual ~Tokenizer() = default;
    virtual std::vector<std::string> tokenize(const std::string& text) const = 0;
    virtual std::string detokenize(std::span<const std::string> tokens) const = 0;
};

// Default: whitespace-delimited words, joined back with single spaces.
class WhitespaceTokenizer final : public Tokenizer {
public:
    std::vector<std::string> tokenize(const std::string& text) const override;
    std::string detokenize(std::span<const std::string> tokens) const override;
};

// Splits the article body into consecutive chunks of exactly `budget` tokens
// (the last one may be short). An empty body yields no chunks. Throws
// std::invalid_argument when budget < 1.
std::vector<Chunk> chunk_article(const corpus::Article& article, int budget,
                                 const Tokenizer& tokenizer);

// One calendar month before the resolution date, clamping the day to the
// target month's last day (2025-03-31 -> 2025-02-28).
Date cutoff_from_resolution(const Date& resolution_date);

struct RetrievalConfig {
    int k = 5;
    int chunk_tokens = 512;
    std::string embed_model;
    // Which sample date the one-month cutoff is computed from.
    std::string cutoff_date_field = "resolution_date";  // or "earliest_resolution_date"
};

}  // namespace nf::retrieval
