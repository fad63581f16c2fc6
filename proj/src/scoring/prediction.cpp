#include "nf/scoring/prediction.h"

namespace nf::scoring {

nlohmann::json to_json(const Prediction& p) {
    return {
        {"answer", p.answer},
        {"probability", p.probability},
        {"probability_clamped", p.probability_clamped},
        {"raw_response", p.raw_response},
        {"sample_id", p.sample_id},
    };
}

Prediction prediction_from_json(const nlohmann::json& j) {
    Prediction p;
    p.answer = j.value("answer", "");
    p.probability = j.value("probability", 0.0);
    p.probability_clamped = j.value("probability_clamped", false);
    p.raw_response = j.value("raw_response", "");
    p.sample_id = j.value("sample_id", "");
    return p;
}

}  // namespace nf::scoring
