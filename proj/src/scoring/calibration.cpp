#include "nf/scoring/calibration.h"

#include <stdexcept>

namespace nf::scoring {

std::vector<CalibrationBin> calibration_curve(const std::vector<GradedPrediction>& graded,
                                              size_t bins) {
    if (bins < 1) throw std::invalid_argument("calibration_curve: bins must be >= 1");

    std::vector<CalibrationBin> curve(bins);
    std::vector<double> conf_sum(bins, 0.0);
    std::vector<size_t> correct_count(bins, 0);
    for (size_t i = 0; i < bins; ++i) {
        curve[i].bin_low = static_cast<double>(i) / static_cast<double>(bins);
        curve[i].bin_high = static_cast<double>(i + 1) / static_cast<double>(bins);
    }

    for (const auto& g : graded) {
        double q = g.prediction.probability;
        size_t idx = static_cast<size_t>(q * static_cast<double>(bins));
        if (idx >= bins) idx = bins - 1;  // q == 1.0 lands in the final bin
        ++curve[idx].count;
        conf_sum[idx] += q;
        if (g.correct) ++correct_count[idx];
    }

    for (size_t i = 0; i < bins; ++i) {
        if (curve[i].count > 0) {
            curve[i].mean_confidence = conf_sum[i] / static_cast<double>(curve[i].count);
            curve[i].empirical_accuracy =
                static_cast<double>(correct_count[i]) / static_cast<double>(curve[i].count);
        }
    }
    return curve;
}

nlohmann::json to_json(const std::vector<CalibrationBin>& curve) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& b : curve) {
        nlohmann::json j = {{"bin_low", b.bin_low}, {"bin_high", b.bin_high}, {"count", b.count}};
        j["mean_confidence"] = b.mean_confidence ? nlohmann::json(*b.mean_confidence)
                                                 : nlohmann::json(nullptr);
        j["empirical_accuracy"] = b.empirical_accuracy ? nlohmann::json(*b.empirical_accuracy)
                                                       : nlohmann::json(nullptr);
        arr.push_back(std::move(j));
    }
    return arr;
}

std::vector<CalibrationBin> calibration_from_json(const nlohmann::json& j) {
    std::vector<CalibrationBin> curve;
    for (const auto& item : j) {
        CalibrationBin b;
        b.bin_low = item.value("bin_low", 0.0);
        b.bin_high = item.value("bin_high", 0.0);
        b.count = item.value("count", size_t{0});
        if (item.contains("mean_confidence") && !item["mean_confidence"].is_null()) {
            b.mean_confidence = item["mean_confidence"].get<double>();
        }
        if (item.contains("empirical_accuracy") && !item["empirical_accuracy"].is_null()) {
            b.empirical_accuracy = item["empirical_accuracy"].get<double>();
        }
        curve.push_back(b);
    }
    return curve;
}

}  // namespace nf::scoring
