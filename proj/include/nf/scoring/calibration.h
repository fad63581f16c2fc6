#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "nf/scoring/prediction.h"

namespace nf::scoring {

struct CalibrationBin {
    double bin_low = 0.0;
    double bin_high = 0.0;
    size_t count = 0;
    // Unset for empty bins — never reported as 0, which would corrupt plots.
    std::optional<double> mean_confidence;
    std::optional<double> empirical_accuracy;
};

// Equal-width bins over [0,1]; every bin is [low, high) except the last,
// which includes 1.0. Empty bins are emitted with count 0. Throws
// std::invalid_argument when bins < 1.
std::vector<CalibrationBin> calibration_curve(const std::vector<GradedPrediction>& graded,
                                              size_t bins);

nlohmann::json to_json(const std::vector<CalibrationBin>& curve);
std::vector<CalibrationBin> calibration_from_json(const nlohmann::json& j);

}  // namespace nf::scoring
