#include "nf/scoring/matching.h"

#include <stdexcept>

#include "nf/common/text.h"
#include "nf/gateway/parsers.h"

namespace nf::scoring {

std::string grader_prompt(const std::string& candidate, const std::string& truth) {
    std::string prompt;
    prompt += "You are grading a short free-form answer against the ground truth.\n";
    prompt += "Decide whether the candidate answer refers to the same outcome as the ground "
              "truth answer. Different surface forms of the same entity (extra middle names, "
              "abbreviations, added titles) count as a match. Different entities, dates, or "
              "places do not.\n\n";
    prompt += "Ground truth answer: " + truth + "\n";
    prompt += "Candidate answer: " + candidate + "\n\n";
    prompt += "Reply with <answer>1</answer> if they match, <answer>0</answer> otherwise. "
              "ALWAYS END YOUR RESPONSE IN <answer> </answer> tags.";
    return prompt;
}

Result<bool> match_answers(const std::string& candidate, const std::string& truth,
                           const gateway::Client& grader) {
    if (candidate.empty() || truth.empty()) {
        throw std::invalid_argument("match_answers: empty answer");
    }
    if (text::normalize_answer(candidate) == text::normalize_answer(truth)) {
        return true;
    }
    auto response = grader.complete(grader_prompt(candidate, truth));
    if (!response.ok()) {
        return Result<bool>::failure("grader failed: " + response.error());
    }
    auto verdict = gateway::parse_verdict(response.value());
    if (!verdict.ok()) {
        return Result<bool>::failure("grader verdict unparseable: " + verdict.error());
    }
    return verdict.value();
}

Result<double> grader_agreement(const std::vector<Prediction>& predictions,
                                const std::string& truth, const gateway::Client& grader_a,
                                const gateway::Client& grader_b) {
    if (predictions.empty()) {
        throw std::invalid_argument("grader_agreement: no predictions");
    }
    size_t agreed = 0;
    for (const auto& p : predictions) {
        auto a = match_answers(p.answer, truth, grader_a);
        if (!a.ok()) return Result<double>::failure(a.error());
        auto b = match_answers(p.answer, truth, grader_b);
        if (!b.ok()) return Result<double>::failure(b.error());
        if (a.value() == b.value()) ++agreed;
    }
    return static_cast<double>(agreed) / static_cast<double>(predictions.size());
}

}  // namespace nf::scoring
