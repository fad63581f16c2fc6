#pragma once

#include <string>
#include <vector>

#include "nf/qgen/sample.h"
#include "nf/qgen/templates.h"
#include "nf/retrieval/index.h"

namespace nf::harness {

struct RetrievedChunk {
    retrieval::Chunk chunk;
    retrieval::ArticleMeta article;
};

// Renders the evaluation prompt from the with- or without-retrieval template.
// The two are separate files on purpose — each must stay auditable against
// its golden copy byte for byte. With retrieval on and zero chunks, the
// retrieval header is present with no article blocks (the training-time
// 0-chunk case).
std::string build_prompt(const qgen::ForecastSample& sample,
                         const std::vector<RetrievedChunk>& chunks, bool with_retrieval,
                         const qgen::TemplateStore& templates);

// "Article N:" block with title, source, publish date, and passage.
std::string render_article_block(size_t number, const RetrievedChunk& retrieved);

std::string render_article_blocks(const std::vector<RetrievedChunk>& chunks);

}  // namespace nf::harness
