#include "nf/retrieval/chunker.h"

#include <stdexcept>

#include "nf/common/text.h"

namespace nf::retrieval {

std::vector<std::string> WhitespaceTokenizer::tokenize(const std::string& text) const {
    return text::split_words(text);
}

std::string WhitespaceTokenizer::detokenize(std::span<const std::string> tokens) const {
    std::string out;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

std::vector<Chunk> chunk_article(const corpus::Article& article, int budget,
                                 const Tokenizer& tokenizer) {
    if (budget < 1) throw std::invalid_argument("chunk budget must be >= 1");

    std::vector<std::string> tokens = tokenizer.tokenize(article.body);
    std::vector<Chunk> chunks;
    if (tokens.empty()) return chunks;

    const size_t step = static_cast<size_t>(budget);
    for (size_t start = 0; start < tokens.size(); start += step) {
        size_t len = std::min(step, tokens.size() - start);
        Chunk c;
        c.article_id = article.id;
        c.chunk_id = article.id + "#" + std::to_string(chunks.size());
        c.publish_date = article.publish_date;
        c.text = tokenizer.detokenize(std::span<const std::string>(tokens.data() + start, len));
        c.token_count = static_cast<int>(len);
        chunks.push_back(std::move(c));
    }
    return chunks;
}

Date cutoff_from_resolution(const Date& resolution_date) {
    return resolution_date.add_months_clamped(-1);
}

}  // namespace nf::retrieval
