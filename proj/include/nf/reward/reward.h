#pragma once

#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nf/common/result.h"
#include "nf/qgen/sample.h"
#include "nf/scoring/prediction.h"

namespace nf::reward {

enum class RewardMode { accuracy, brier, accuracy_plus_brier };

const char* mode_name(RewardMode mode);
std::optional<RewardMode> mode_from_name(const std::string& name);

// Per-completion reward. accuracy: the correctness indicator. brier: the
// free-form Brier score (binary questions use the standard binary Brier
// instead). accuracy_plus_brier: indicator + the brier term, range [-1,2].
double reward_value(double q, bool correct, RewardMode mode,
                    qgen::QuestionKind kind = qgen::QuestionKind::freeform);

// Group-relative advantages: a_i = r_i - mean(r). No standard-deviation
// division anywhere; all-equal groups return exact zeros. Throws
// std::invalid_argument on an empty group.
std::vector<double> grpo_advantages(const std::vector<double>& rewards);

struct Completion {
    scoring::Prediction prediction;
    bool correct = false;
};

struct RewardGroup {
    std::string sample_id;
    std::vector<Completion> completions;
    std::vector<double> rewards;
    std::vector<double> advantages;
    RewardMode mode = RewardMode::accuracy_plus_brier;
    qgen::QuestionKind kind = qgen::QuestionKind::freeform;

    size_t group_size() const { return completions.size(); }
};

RewardGroup make_reward_group(const std::string& sample_id, std::vector<Completion> completions,
                              RewardMode mode, qgen::QuestionKind kind);

// --- Training batch ---------------------------------------------------------

inline constexpr int kTrainingBatchSchemaVersion = 1;

// JSONL: a header line carrying the schema version, then one line per group
// pairing the prompt with its completions, rewards, and advantages. `groups`
// and `prompts` run in parallel.
Status emit_training_batch(const std::vector<RewardGroup>& groups,
                           const std::vector<std::string>& prompts,
                           const std::filesystem::path& path);

struct TrainingBatch {
    int schema_version = 0;
    std::vector<RewardGroup> groups;
    std::vector<std::string> prompts;
};

Result<TrainingBatch> parse_training_batch(const std::filesystem::path& path);

// --- Training-prompt construction helpers -----------------------------------

// Uniformly random chunk count in {0, ..., max_chunks} for training prompts.
int sample_chunk_count(std::mt19937_64& rng, int max_chunks = 5);

// Deterministic global shuffle used to interleave free-form and binary
// samples in mixed batches.
std::vector<size_t> shuffled_order(size_t n, uint64_t seed);

}  // namespace nf::reward
