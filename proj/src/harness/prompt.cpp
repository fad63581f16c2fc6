#include "nf/harness/prompt.h"

namespace nf::harness {

std::string render_article_block(size_t number, const RetrievedChunk& retrieved) {
    std::string out;
    out += "Article " + std::to_string(number) + ":\n";
    out += "Title: " + retrieved.article.title + "\n";
    out += "Source: " + retrieved.article.source + "\n";
    out += "Article Publish Date: " + retrieved.chunk.publish_date.human() + "\n";
    out += "Relevant Passage: " + retrieved.chunk.text;
    return out;
}

std::string render_article_blocks(const std::vector<RetrievedChunk>& chunks) {
    std::string out;
    for (size_t i = 0; i < chunks.size(); ++i) {
        if (i > 0) out += "\n\n";
        out += render_article_block(i + 1, chunks[i]);
    }
    return out;
}

std::string build_prompt(const qgen::ForecastSample& sample,
                         const std::vector<RetrievedChunk>& chunks, bool with_retrieval,
                         const qgen::TemplateStore& templates) {
    std::map<std::string, std::string> subs = {
        {"question_title", sample.question_title},
        {"question_background", sample.background},
        {"resolution_criteria", qgen::criteria_text(sample)},
        {"expected_answer_type", sample.answer_type},
    };
    if (!with_retrieval) {
        return templates.render(qgen::kEvalWithoutRetrieval, subs);
    }
    subs["retrieved_news_articles_text"] = render_article_blocks(chunks);
    return templates.render(qgen::kEvalWithRetrieval, subs);
}

}  // namespace nf::harness
