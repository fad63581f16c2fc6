#include "nf/scoring/brier.h"

#include <stdexcept>

namespace nf::scoring {

namespace {
void check_probability(double q) {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("probability must be in [0,1]");
    }
}
}  // namespace

double freeform_brier(double q, bool correct) {
    check_probability(q);
    if (correct) return 1.0 - (q - 1.0) * (q - 1.0);
    return -q * q;
}

double binary_brier(double q_yes, bool outcome) {
    check_probability(q_yes);
    double target = outcome ? 1.0 : 0.0;
    return -(q_yes - target) * (q_yes - target);
}

double binary_brier_from_correctness(double q, bool correct) {
    check_probability(q);
    return binary_brier(correct ? q : 1.0 - q, true);
}

double avg_at_n(const std::vector<std::vector<bool>>& per_sample_results) {
    if (per_sample_results.empty()) {
        throw std::invalid_argument("avg_at_n: no samples");
    }
    double total = 0.0;
    for (const auto& attempts : per_sample_results) {
        if (attempts.empty()) {
            throw std::invalid_argument("avg_at_n: sample with no attempts");
        }
        double hits = 0.0;
        for (bool b : attempts) hits += b ? 1.0 : 0.0;
        total += hits / static_cast<double>(attempts.size());
    }
    return total / static_cast<double>(per_sample_results.size());
}

}  // namespace nf::scoring
