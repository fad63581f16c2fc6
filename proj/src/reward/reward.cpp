#include "nf/reward/reward.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "nf/common/jsonl.h"
#include "nf/scoring/brier.h"

namespace nf::reward {

using json = nlohmann::json;

const char* mode_name(RewardMode mode) {
    switch (mode) {
        case RewardMode::accuracy: return "accuracy";
        case RewardMode::brier: return "brier";
        case RewardMode::accuracy_plus_brier: return "accuracy_plus_brier";
    }
    return "unknown";
}

std::optional<RewardMode> mode_from_name(const std::string& name) {
    if (name == "accuracy") return RewardMode::accuracy;
    if (name == "brier") return RewardMode::brier;
    if (name == "accuracy_plus_brier") return RewardMode::accuracy_plus_brier;
    return std::nullopt;
}

namespace {
double brier_term(double q, bool correct, qgen::QuestionKind kind) {
    if (kind == qgen::QuestionKind::binary) {
        return scoring::binary_brier_from_correctness(q, correct);
    }
    return scoring::freeform_brier(q, correct);
}
}  // namespace

double reward_value(double q, bool correct, RewardMode mode, qgen::QuestionKind kind) {
    switch (mode) {
        case RewardMode::accuracy:
            if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("probability must be in [0,1]");
            return correct ? 1.0 : 0.0;
        case RewardMode::brier:
            return brier_term(q, correct, kind);
        case RewardMode::accuracy_plus_brier:
            return (correct ? 1.0 : 0.0) + brier_term(q, correct, kind);
    }
    throw std::invalid_argument("unknown reward mode");
}

std::vector<double> grpo_advantages(const std::vector<double>& rewards) {
    if (rewards.empty()) throw std::invalid_argument("grpo_advantages: empty group");

    bool all_equal = std::all_of(rewards.begin(), rewards.end(),
                                 [&](double r) { return r == rewards.front(); });
    if (all_equal) return std::vector<double>(rewards.size(), 0.0);

    double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) /
                  static_cast<double>(rewards.size());
    std::vector<double> advantages(rewards.size());
    for (size_t i = 0; i < rewards.size(); ++i) advantages[i] = rewards[i] - mean;
    return advantages;
}

RewardGroup make_reward_group(const std::string& sample_id, std::vector<Completion> completions,
                              RewardMode mode, qgen::QuestionKind kind) {
    RewardGroup g;
    g.sample_id = sample_id;
    g.completions = std::move(completions);
    g.mode = mode;
    g.kind = kind;
    g.rewards.reserve(g.completions.size());
    for (const auto& c : g.completions) {
        g.rewards.push_back(reward_value(c.prediction.probability, c.correct, mode, kind));
    }
    g.advantages = grpo_advantages(g.rewards);
    return g;
}

Status emit_training_batch(const std::vector<RewardGroup>& groups,
                           const std::vector<std::string>& prompts,
                           const std::filesystem::path& path) {
    if (groups.size() != prompts.size()) {
        return Status::failure("emit_training_batch: groups/prompts size mismatch");
    }
    jsonl::Writer out(path);
    if (!out.ok()) return Status::failure("cannot write " + path.string());

    out.write({{"schema", "training_batch"}, {"version", kTrainingBatchSchemaVersion}});
    for (size_t i = 0; i < groups.size(); ++i) {
        const RewardGroup& g = groups[i];
        json completions = json::array();
        for (size_t c = 0; c < g.completions.size(); ++c) {
            completions.push_back({{"answer", g.completions[c].prediction.answer},
                                   {"probability", g.completions[c].prediction.probability},
                                   {"raw_response", g.completions[c].prediction.raw_response},
                                   {"correct", g.completions[c].correct},
                                   {"reward", g.rewards[c]},
                                   {"advantage", g.advantages[c]}});
        }
        out.write({{"sample_id", g.sample_id},
                   {"prompt", prompts[i]},
                   {"mode", mode_name(g.mode)},
                   {"question_kind", qgen::kind_name(g.kind)},
                   {"group_size", g.group_size()},
                   {"completions", completions}});
    }
    return Status::success();
}

Result<TrainingBatch> parse_training_batch(const std::filesystem::path& path) {
    TrainingBatch batch;
    bool saw_header = false;
    std::string error;

    auto stats = jsonl::for_each(path, [&](size_t line, const json& record) {
        if (!error.empty()) return;
        if (!saw_header) {
            if (record.value("schema", "") != "training_batch") {
                error = "line 1 is not a training_batch header";
                return;
            }
            batch.schema_version = record.value("version", 0);
            saw_header = true;
            return;
        }
        RewardGroup g;
        g.sample_id = record.value("sample_id", "");
        auto mode = mode_from_name(record.value("mode", ""));
        if (!mode) {
            error = "line " + std::to_string(line) + ": unknown mode";
            return;
        }
        g.mode = *mode;
        g.kind = qgen::kind_from_name(record.value("question_kind", "freeform"));
        for (const auto& cj : record.value("completions", json::array())) {
            Completion c;
            c.prediction.answer = cj.value("answer", "");
            c.prediction.probability = cj.value("probability", 0.0);
            c.prediction.raw_response = cj.value("raw_response", "");
            c.prediction.sample_id = g.sample_id;
            c.correct = cj.value("correct", false);
            g.completions.push_back(std::move(c));
            g.rewards.push_back(cj.value("reward", 0.0));
            g.advantages.push_back(cj.value("advantage", 0.0));
        }
        batch.groups.push_back(std::move(g));
        batch.prompts.push_back(record.value("prompt", ""));
    });
    if (!stats.ok()) return Result<TrainingBatch>::failure(stats.error());
    if (!error.empty()) return Result<TrainingBatch>::failure(error);
    if (!saw_header) return Result<TrainingBatch>::failure("missing training_batch header line");
    return batch;
}

int sample_chunk_count(std::mt19937_64& rng, int max_chunks) {
    std::uniform_int_distribution<int> dist(0, max_chunks);
    return dist(rng);
}

std::vector<size_t> shuffled_order(size_t n, uint64_t seed) {
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

}  // namespace nf::reward
