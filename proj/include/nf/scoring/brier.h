#pragma once

#include <vector>

namespace nf::scoring {

// Shifted free-form Brier score: 1-(q-1)^2 when the answer matched, -q^2
// otherwise. q=0 is worth 0 either way; range [-1,1]. Throws
// std::invalid_argument for q outside [0,1].
double freeform_brier(double q, bool correct);

// Standard binary Brier as used on prediction-market questions:
// -(q - outcome)^2 with outcome in {0,1}. Range [-1,0]; q=0.5 scores -0.25
// regardless of outcome.
double binary_brier(double q_yes, bool outcome);

// Binary Brier expressed in terms of the forecaster's confidence in its own
// stated side: -(1-q)^2 when correct, -q^2 when not.
double binary_brier_from_correctness(double q, bool correct);

// Mean over samples of mean over that sample's attempts. Throws
// std::invalid_argument when the outer list or any inner list is empty.
double avg_at_n(const std::vector<std::vector<bool>>& per_sample_results);

}  // namespace nf::scoring
