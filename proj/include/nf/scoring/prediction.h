#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace nf::scoring {

// A forecaster's parsed output: best-guess answer and the probability it
// assigns to that answer being the true outcome.
struct Prediction {
    std::string answer;
    double probability = 0.0;  // in [0,1]; clamped at parse time if out of range
    bool probability_clamped = false;
    std::string raw_response;
    std::string sample_id;
};

struct GradedPrediction {
    Prediction prediction;
    bool correct = false;
    double freeform_brier = 0.0;  // 1-(q-1)^2 if correct else -q^2
    std::string grader_id;
};

nlohmann::json to_json(const Prediction& p);
Prediction prediction_from_json(const nlohmann::json& j);

}  // namespace nf::scoring
