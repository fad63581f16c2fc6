#include "nf/gateway/parsers.h"

#include <cctype>
#include <cstdlib>

namespace nf::gateway {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// First <tag>...</tag> at or after `from`; returns the inner span and sets
// `next` to just past the close tag.
std::optional<std::string> find_tag(const std::string& text, const std::string& tag, size_t from,
                                    size_t* next) {
    const std::string open = "<" + tag + ">";
    const std::string close = "</" + tag + ">";
    size_t start = text.find(open, from);
    if (start == std::string::npos) return std::nullopt;
    size_t inner = start + open.size();
    size_t end = text.find(close, inner);
    if (end == std::string::npos) return std::nullopt;
    if (next) *next = end + close.size();
    return text.substr(inner, end - inner);
}

}  // namespace

std::optional<std::string> last_tag(const std::string& text, const std::string& tag) {
    std::optional<std::string> found;
    size_t pos = 0;
    while (true) {
        size_t next = 0;
        auto span = find_tag(text, tag, pos, &next);
        if (!span) break;
        found = std::move(span);
        pos = next;
    }
    return found;
}

Result<scoring::Prediction> parse_prediction(const std::string& response) {
    auto answer = last_tag(response, "answer");
    if (!answer) {
        return Result<scoring::Prediction>::failure("missing <answer> tag");
    }
    auto probability = last_tag(response, "probability");
    if (!probability) {
        return Result<scoring::Prediction>::failure("missing <probability> tag");
    }

    scoring::Prediction p;
    p.answer = trim(*answer);
    if (p.answer.empty()) {
        return Result<scoring::Prediction>::failure("empty answer");
    }
    p.raw_response = response;

    std::string prob_text = trim(*probability);
    if (prob_text.empty()) {
        return Result<scoring::Prediction>::failure("empty probability");
    }
    char* end = nullptr;
    double q = std::strtod(prob_text.c_str(), &end);
    if (end == prob_text.c_str()) {
        return Result<scoring::Prediction>::failure("unparseable probability: " + prob_text);
    }
    // Tolerate a stray "%" or trailing punctuation, but reject other garbage.
    std::string rest = trim(end);
    if (rest == "%") {
        q /= 100.0;
        rest.clear();
    }
    if (!rest.empty() && rest != "." && rest != ",") {
        return Result<scoring::Prediction>::failure("unparseable probability: " + prob_text);
    }
    if (q != q) {
        return Result<scoring::Prediction>::failure("probability is NaN");
    }
    if (q < 0.0) {
        q = 0.0;
        p.probability_clamped = true;
    } else if (q > 1.0) {
        q = 1.0;
        p.probability_clamped = true;
    }
    p.probability = q;
    return p;
}

Result<bool> parse_verdict(const std::string& response) {
    auto answer = last_tag(response, "answer");
    if (!answer) {
        return Result<bool>::failure("missing <answer> tag");
    }
    std::string v = trim(*answer);
    if (v == "1") return true;
    if (v == "0") return false;
    return Result<bool>::failure("verdict is not 0/1: " + v.substr(0, 64));
}

SampleBlockParse parse_sample_blocks(const std::string& response) {
    SampleBlockParse out;
    // DIVERSE generation caps at single digits in practice; scan generously.
    for (int n = 1; n <= 16; ++n) {
        const std::string tag = "q" + std::to_string(n);
        size_t pos = 0;
        while (true) {
            size_t next = 0;
            auto body = find_tag(response, tag, pos, &next);
            if (!body) break;
            pos = next;

            RawSampleBlock block;
            block.question_id = n - 1;
            if (auto id = last_tag(*body, "question_id")) {
                std::string id_text = trim(*id);
                char* end = nullptr;
                long parsed = std::strtol(id_text.c_str(), &end, 10);
                if (end != id_text.c_str() && *end == '\0') {
                    block.question_id = static_cast<int>(parsed);
                }
            }

            auto title = find_tag(*body, "question_title", 0, nullptr);
            auto background = find_tag(*body, "background", 0, nullptr);
            auto criteria = find_tag(*body, "resolution_criteria", 0, nullptr);
            auto answer = find_tag(*body, "answer", 0, nullptr);
            auto answer_type = find_tag(*body, "answer_type", 0, nullptr);

            if (!title || trim(*title).empty()) {
                out.skipped.push_back(tag + ": missing question_title");
                continue;
            }
            if (!answer || trim(*answer).empty()) {
                out.skipped.push_back(tag + ": missing answer");
                continue;
            }
            if (!criteria) {
                out.skipped.push_back(tag + ": missing resolution_criteria");
                continue;
            }
            block.question_title = trim(*title);
            block.background = background ? trim(*background) : "";
            block.resolution_criteria = trim(*criteria);
            block.answer = trim(*answer);
            block.answer_type = answer_type ? trim(*answer_type) : "";
            out.blocks.push_back(std::move(block));
        }
    }
    return out;
}

}  // namespace nf::gateway
