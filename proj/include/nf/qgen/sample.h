#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nf/common/date.h"

namespace nf::qgen {

enum class QuestionKind { freeform, binary };

const char* kind_name(QuestionKind kind);
QuestionKind kind_from_name(const std::string& name);

struct ResolutionCriteria {
    std::string source_of_truth;
    Date resolution_date;
    std::string answer_format;
    // The criteria block exactly as the model produced it (may contain HTML
    // list markup); used verbatim when rendering prompts.
    std::string raw_text;
};

struct ForecastSample {
    std::string sample_id;
    std::string question_title;
    std::string background;
    ResolutionCriteria resolution;
    std::string answer;       // ground truth
    std::string answer_type;  // e.g. "string (name)"
    std::string source_article_id;
    std::string source_url;
    QuestionKind kind = QuestionKind::freeform;
    // Set by the optional search-backed correction pass; absent for pipeline
    // output.
    std::optional<Date> earliest_resolution_date;
    // False until finalize_resolution_date ran; when false, resolution dates
    // are the model's proposal (possibly unset).
    bool resolution_date_final = false;

    const Date& resolution_date() const { return resolution.resolution_date; }
};

std::string sample_id_for(const std::string& article_id, const std::string& question_title);

// The q-block XML rendering used when a sample is sent back through the
// selector prompts.
std::string render_question_block(const ForecastSample& sample, int block_number);
std::string render_question_blocks(const std::vector<ForecastSample>& samples);

// Criteria text rendered for prompts: raw model text when present, otherwise
// a <ul> reconstructed from the structured fields.
std::string criteria_text(const ForecastSample& sample);

nlohmann::json to_json(const ForecastSample& s);
ForecastSample sample_from_json(const nlohmann::json& j);

// Metaculus-style binary questions bypass generation and enter the dataset
// directly with answers "Yes"/"No".
ForecastSample make_binary_sample(const std::string& question_title, const std::string& background,
                                  const std::string& source_of_truth, const Date& resolution_date,
                                  bool outcome_yes, const std::string& source_url);

}  // namespace nf::qgen
