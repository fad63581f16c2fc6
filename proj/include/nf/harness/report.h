#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nf/common/result.h"
#include "nf/scoring/calibration.h"

namespace nf::harness {

// One prediction attempt, persisted to the per-prediction JSONL. Every
// aggregate in an EvalReport is recomputable from these records alone.
struct PredictionRecord {
    std::string sample_id;
    int attempt = 0;
    std::string question_kind = "freeform";
    std::string resolution_date;  // ISO; month grouping keys on this
    std::string status = "ok";    // ok | transport_error | parse_error | grade_error
    std::string error;
    std::string answer;
    double probability = 0.0;
    bool probability_clamped = false;
    bool correct = false;
    double freeform_brier = 0.0;
    std::optional<double> binary_brier;  // set for binary-kind records
    std::string raw_response;

    bool graded() const { return status == "ok"; }
};

nlohmann::json to_json(const PredictionRecord& r);
PredictionRecord prediction_record_from_json(const nlohmann::json& j);

struct MonthlyRow {
    std::string month;  // "2025-06"
    size_t n = 0;       // distinct samples resolving this month
    double accuracy = 0.0;
    double brier = 0.0;  // mean per-kind score over the month's predictions
};

struct EvalReport {
    std::string dataset_id;
    size_t n_samples = 0;  // samples with at least one graded attempt
    int attempts_per_sample = 1;
    double accuracy = 0.0;  // avg@N
    double mean_freeform_brier = 0.0;
    std::optional<double> mean_binary_brier;
    std::vector<scoring::CalibrationBin> calibration;
    std::vector<MonthlyRow> monthly;  // chronological; empty months omitted
    int retrieval_k = 0;              // 0 when retrieval was off
    std::string grader;
    size_t failed_predictions = 0;

    bool operator==(const EvalReport& other) const;
};

nlohmann::json to_json(const EvalReport& r);
EvalReport report_from_json(const nlohmann::json& j);

struct ReportMeta {
    std::string dataset_id;
    int attempts_per_sample = 1;
    size_t calibration_bins = 10;
    int retrieval_k = 0;
    std::string grader;
};

// The one aggregation path: evaluate() writes records and then calls this, so
// reports are recomputable from the log by construction.
EvalReport recompute_report(const std::vector<PredictionRecord>& records, const ReportMeta& meta);

std::vector<MonthlyRow> monthly_breakdown(const std::vector<PredictionRecord>& records);

Result<std::vector<PredictionRecord>> load_prediction_log(const std::filesystem::path& path);

enum class ReportFormat { json, table, plotdata };

// json: canonical single file (round-trips). table: human-readable text.
// plotdata: <stem>_calibration.csv (one row per non-empty bin) and
// <stem>_scatter.csv (overall + per-month accuracy/brier points).
Status report_render(const EvalReport& report, ReportFormat format,
                     const std::filesystem::path& out_path);

std::string render_report_table(const EvalReport& report);

}  // namespace nf::harness
