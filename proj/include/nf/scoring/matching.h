#pragma once

#include <string>
#include <vector>

#include "nf/common/result.h"
#include "nf/gateway/client.h"
#include "nf/scoring/prediction.h"

namespace nf::scoring {

// Semantic answer matching with an exact-match fast path. Normalized-equal
// strings return true with zero client calls; otherwise the grader model is
// asked for a 0/1 verdict. Grader failures propagate — a prediction is never
// silently marked wrong.
Result<bool> match_answers(const std::string& candidate, const std::string& truth,
                           const gateway::Client& grader);

// The prompt sent to the grader on the slow path; exposed for audits.
std::string grader_prompt(const std::string& candidate, const std::string& truth);

// Fraction of predictions on which two graders return the same verdict.
Result<double> grader_agreement(const std::vector<Prediction>& predictions,
                                const std::string& truth, const gateway::Client& grader_a,
                                const gateway::Client& grader_b);

}  // namespace nf::scoring
