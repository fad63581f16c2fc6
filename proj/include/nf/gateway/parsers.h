#pragma once

#include <string>
#include <vector>

#include "nf/common/result.h"
#include "nf/scoring/prediction.h"

namespace nf::gateway {

// Extracts the LAST <answer> and LAST <probability> spans from a forecaster
// response. Trims whitespace; out-of-range probabilities clamp to [0,1] with
// the flag set. Missing tags and empty answers are structured errors, never
// exceptions.
Result<scoring::Prediction> parse_prediction(const std::string& response);

// Last <answer> tag parsed as a 0/1 verdict.
Result<bool> parse_verdict(const std::string& response);

struct RawSampleBlock {
    int question_id = -1;
    std::string question_title;
    std::string background;
    std::string resolution_criteria;  // inner markup preserved verbatim
    std::string answer;
    std::string answer_type;
};

struct SampleBlockParse {
    std::vector<RawSampleBlock> blocks;
    std::vector<std::string> skipped;  // reason per malformed block
};

// Extracts <q1>..</q1>, <q2>.. style blocks from a creator/selector response,
// tolerating surrounding prose. Malformed blocks are skipped with reasons.
SampleBlockParse parse_sample_blocks(const std::string& response);

// Last occurrence of <tag>...</tag>; empty optional when absent.
std::optional<std::string> last_tag(const std::string& text, const std::string& tag);

}  // namespace nf::gateway
