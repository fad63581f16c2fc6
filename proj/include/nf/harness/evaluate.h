#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "nf/harness/report.h"
#include "nf/qgen/sample.h"
#include "nf/qgen/templates.h"
#include "nf/retrieval/index.h"

namespace nf::harness {

struct EvalOptions {
    std::string dataset_id = "dataset";
    int attempts_per_sample = 1;
    bool with_retrieval = false;
    int k = 5;
    size_t calibration_bins = 10;
    // strict: any transport/parse/grade failure fails the whole run. Off,
    // failures are logged, counted, and excluded from means.
    bool strict = false;
    std::string cutoff_date_field = "resolution_date";
    // Samples in flight at once. Records always land in (sample, attempt)
    // order, so worker count never changes any output byte.
    int workers = 1;
};

struct EvalClients {
    const gateway::Client* forecaster = nullptr;
    const gateway::Client* grader = nullptr;
    const gateway::Client* embedder = nullptr;  // required with retrieval
};

struct EvalOutcome {
    EvalReport report;
    std::vector<PredictionRecord> records;
};

// For each sample: temporal cutoff -> top-k retrieval -> prompt -> N attempts
// -> parse -> grade -> score. Per-prediction records are appended to
// `predictions_path` (when given) before aggregation, so the report is
// recomputable from the log. Attempts differ only by the sampling seed, which
// keeps them apart in the gateway cache.
Result<EvalOutcome> evaluate(const std::vector<qgen::ForecastSample>& samples,
                             const EvalClients& clients, const retrieval::Index* index,
                             const EvalOptions& options, const qgen::TemplateStore& templates,
                             const std::optional<std::filesystem::path>& predictions_path);

// The cutoff date used for a sample under the configured date field.
Date sample_cutoff(const qgen::ForecastSample& sample, const std::string& cutoff_date_field);

// The text embedded for retrieval: question title plus background.
std::string retrieval_query_text(const qgen::ForecastSample& sample);

}  // namespace nf::harness
