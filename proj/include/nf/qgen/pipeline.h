#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nf/common/result.h"
#include "nf/corpus/article.h"
#include "nf/gateway/client.h"
#include "nf/qgen/sample.h"
#include "nf/qgen/templates.h"

namespace nf::qgen {

struct StageReport {
    std::string stage_name;
    size_t input_count = 0;
    size_t output_count = 0;
};

nlohmann::json to_json(const std::vector<StageReport>& reports);
std::vector<StageReport> stage_reports_from_json(const nlohmann::json& j);

// Human-readable attrition table; numbers are rendered with thousands
// separators ("744,963").
std::string render_stage_table(const std::vector<StageReport>& reports);
std::string format_thousands(size_t n);

// Audit counters keyed by reason code, aggregated order-independently.
struct PipelineCounters {
    std::map<std::string, size_t> counts;
    void bump(const std::string& key, size_t n = 1) { counts[key] += n; }
    void merge(const PipelineCounters& other);
    size_t get(const std::string& key) const;
};

struct PipelineConfig {
    int questions_per_article = 3;
    Date resolution_threshold = Date(2024, 1, 1);
    // Strict per-token leak mode: in addition to the full answer string, any
    // answer token of >= 4 chars appearing in the question text is a leak.
    bool token_leak_check = false;
    int workers = 1;
};

// --- Stage operations -------------------------------------------------------

// Extracts structured fields from a criteria block (source of truth, date,
// answer format); the raw text is preserved alongside.
ResolutionCriteria parse_criteria(const std::string& raw);

// Stage 1: up to `questions_per_article` samples from one article. Malformed
// response blocks are dropped and counted; a creator failure is an error (the
// caller skips the article).
Result<std::vector<ForecastSample>> generate_samples(const corpus::Article& article,
                                                     const gateway::Client& creator,
                                                     const TemplateStore& templates,
                                                     int questions_per_article,
                                                     PipelineCounters& counters);

// Stage 2: true iff the selector's final <answer> tag parses to 1.
// Unparseable verdicts count as invalid.
Result<bool> validate_sample(const ForecastSample& sample, const corpus::Article& article,
                             const gateway::Client& selector, const TemplateStore& templates,
                             PipelineCounters& counters);

// Stage 3: a singleton list returns its element without a model call; larger
// lists go to the selector; the NO GOOD QUESTION sentinel yields nullopt.
Result<std::optional<ForecastSample>> select_best(const std::vector<ForecastSample>& samples,
                                                  const gateway::Client& selector,
                                                  const TemplateStore& templates,
                                                  PipelineCounters& counters);

// Stage 4: asks the selector to rewrite leaking spans. Responses that mutate
// the title, answer, or answer_type are rejected and the original kept; so
// are unparseable rewrites. The structured resolution date never changes.
ForecastSample fix_leakage(const ForecastSample& sample, const gateway::Client& selector,
                           const TemplateStore& templates, PipelineCounters& counters);

// True (keep) iff the canonicalized answer is not a substring of the
// canonicalized title+background+criteria. token_mode extends the check to
// individual answer tokens of >= 4 chars.
bool string_leak_filter(const ForecastSample& sample, bool token_mode = false);

// resolution_date := min(model-proposed date, article publish date); an
// unparseable proposal falls back to the publish date (counted).
ForecastSample finalize_resolution_date(const ForecastSample& sample,
                                        const corpus::Article& article,
                                        PipelineCounters& counters);

// Optional correction pass for late-reported events: a caller-supplied
// resolver (e.g. a search-backed model, whose protocol is out of scope here)
// proposes the earliest date each question could have resolved. Samples keep
// their resolution_date; the earliest date is recorded alongside and the
// cutoff machinery can be configured to use it.
using EarliestDateResolver = std::function<std::optional<Date>(const ForecastSample&)>;
std::vector<ForecastSample> apply_earliest_resolution_dates(std::vector<ForecastSample> samples,
                                                            const EarliestDateResolver& resolver,
                                                            PipelineCounters& counters);

// Keep iff answer_type begins with "string" (case-insensitive).
bool answer_type_filter(const ForecastSample& sample);

// Keep iff resolution_date is strictly after the threshold.
bool resolution_cutoff_filter(const ForecastSample& sample, const Date& threshold);

// --- Whole pipeline ---------------------------------------------------------

struct PipelineResult {
    std::vector<ForecastSample> samples;
    std::vector<StageReport> reports;  // Table-1 order
    PipelineCounters counters;
};

// generation -> validation -> best-selection -> leakage-edit+string filter ->
// answer-type filter -> resolution cutoff. Deterministic for deterministic
// clients regardless of worker count.
PipelineResult run_pipeline(const std::vector<corpus::Article>& articles,
                            const gateway::Client& creator, const gateway::Client& selector,
                            const PipelineConfig& config, const TemplateStore& templates);

}  // namespace nf::qgen
