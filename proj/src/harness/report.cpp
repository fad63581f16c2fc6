#include "nf/harness/report.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "nf/common/jsonl.h"
#include "nf/scoring/brier.h"

namespace nf::harness {

using json = nlohmann::json;

json to_json(const PredictionRecord& r) {
    json j = {
        {"sample_id", r.sample_id},
        {"attempt", r.attempt},
        {"question_kind", r.question_kind},
        {"resolution_date", r.resolution_date},
        {"status", r.status},
        {"error", r.error},
        {"answer", r.answer},
        {"probability", r.probability},
        {"probability_clamped", r.probability_clamped},
        {"correct", r.correct},
        {"freeform_brier", r.freeform_brier},
        {"raw_response", r.raw_response},
    };
    j["binary_brier"] = r.binary_brier ? json(*r.binary_brier) : json(nullptr);
    return j;
}

PredictionRecord prediction_record_from_json(const json& j) {
    PredictionRecord r;
    r.sample_id = j.value("sample_id", "");
    r.attempt = j.value("attempt", 0);
    r.question_kind = j.value("question_kind", "freeform");
    r.resolution_date = j.value("resolution_date", "");
    r.status = j.value("status", "ok");
    r.error = j.value("error", "");
    r.answer = j.value("answer", "");
    r.probability = j.value("probability", 0.0);
    r.probability_clamped = j.value("probability_clamped", false);
    r.correct = j.value("correct", false);
    r.freeform_brier = j.value("freeform_brier", 0.0);
    if (j.contains("binary_brier") && !j["binary_brier"].is_null()) {
        r.binary_brier = j["binary_brier"].get<double>();
    }
    r.raw_response = j.value("raw_response", "");
    return r;
}

bool EvalReport::operator==(const EvalReport& other) const {
    return to_json(*this) == to_json(other);
}

json to_json(const EvalReport& r) {
    json monthly = json::array();
    for (const auto& m : r.monthly) {
        monthly.push_back(
            {{"month", m.month}, {"n", m.n}, {"accuracy", m.accuracy}, {"brier", m.brier}});
    }
    json j = {
        {"dataset_id", r.dataset_id},
        {"n_samples", r.n_samples},
        {"attempts_per_sample", r.attempts_per_sample},
        {"accuracy", r.accuracy},
        {"mean_freeform_brier", r.mean_freeform_brier},
        {"calibration", scoring::to_json(r.calibration)},
        {"monthly", monthly},
        {"retrieval_k", r.retrieval_k},
        {"grader", r.grader},
        {"failed_predictions", r.failed_predictions},
    };
    j["mean_binary_brier"] = r.mean_binary_brier ? json(*r.mean_binary_brier) : json(nullptr);
    return j;
}

EvalReport report_from_json(const json& j) {
    EvalReport r;
    r.dataset_id = j.value("dataset_id", "");
    r.n_samples = j.value("n_samples", size_t{0});
    r.attempts_per_sample = j.value("attempts_per_sample", 1);
    r.accuracy = j.value("accuracy", 0.0);
    r.mean_freeform_brier = j.value("mean_freeform_brier", 0.0);
    if (j.contains("mean_binary_brier") && !j["mean_binary_brier"].is_null()) {
        r.mean_binary_brier = j["mean_binary_brier"].get<double>();
    }
    if (j.contains("calibration")) r.calibration = scoring::calibration_from_json(j["calibration"]);
    for (const auto& m : j.value("monthly", json::array())) {
        MonthlyRow row;
        row.month = m.value("month", "");
        row.n = m.value("n", size_t{0});
        row.accuracy = m.value("accuracy", 0.0);
        row.brier = m.value("brier", 0.0);
        r.monthly.push_back(std::move(row));
    }
    r.retrieval_k = j.value("retrieval_k", 0);
    r.grader = j.value("grader", "");
    r.failed_predictions = j.value("failed_predictions", size_t{0});
    return r;
}

namespace {

double record_score(const PredictionRecord& r) {
    if (r.question_kind == "binary" && r.binary_brier) return *r.binary_brier;
    return r.freeform_brier;
}

}  // namespace

std::vector<MonthlyRow> monthly_breakdown(const std::vector<PredictionRecord>& records) {
    // month -> (samples, correct count, record count, score sum)
    std::map<std::string, std::tuple<std::set<std::string>, size_t, size_t, double>> by_month;
    for (const auto& r : records) {
        if (!r.graded()) continue;
        std::string month = r.resolution_date.size() >= 7 ? r.resolution_date.substr(0, 7) : "";
        auto& [samples, correct, n, score_sum] = by_month[month];
        samples.insert(r.sample_id);
        if (r.correct) ++correct;
        ++n;
        score_sum += record_score(r);
    }
    std::vector<MonthlyRow> out;
    for (const auto& [month, agg] : by_month) {
        const auto& [samples, correct, n, score_sum] = agg;
        MonthlyRow row;
        row.month = month;
        row.n = samples.size();
        row.accuracy = n == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(n);
        row.brier = n == 0 ? 0.0 : score_sum / static_cast<double>(n);
        out.push_back(std::move(row));
    }
    // std::map iteration is already chronological for ISO month keys.
    return out;
}

EvalReport recompute_report(const std::vector<PredictionRecord>& records, const ReportMeta& meta) {
    EvalReport report;
    report.dataset_id = meta.dataset_id;
    report.attempts_per_sample = meta.attempts_per_sample;
    report.retrieval_k = meta.retrieval_k;
    report.grader = meta.grader;

    std::map<std::string, std::vector<bool>> per_sample;  // keyed by sample_id, order-free
    std::vector<scoring::GradedPrediction> graded;
    double ff_sum = 0.0, bin_sum = 0.0;
    size_t ff_n = 0, bin_n = 0;

    for (const auto& r : records) {
        if (!r.graded()) {
            ++report.failed_predictions;
            continue;
        }
        per_sample[r.sample_id].push_back(r.correct);
        scoring::GradedPrediction g;
        g.prediction.answer = r.answer;
        g.prediction.probability = r.probability;
        g.prediction.sample_id = r.sample_id;
        g.correct = r.correct;
        g.freeform_brier = r.freeform_brier;
        graded.push_back(std::move(g));
        if (r.question_kind == "binary" && r.binary_brier) {
            bin_sum += *r.binary_brier;
            ++bin_n;
        } else {
            ff_sum += r.freeform_brier;
            ++ff_n;
        }
    }

    report.n_samples = per_sample.size();
    if (!per_sample.empty()) {
        std::vector<std::vector<bool>> attempts;
        attempts.reserve(per_sample.size());
        for (const auto& [_, a] : per_sample) attempts.push_back(a);
        report.accuracy = scoring::avg_at_n(attempts);
    }
    report.mean_freeform_brier = ff_n == 0 ? 0.0 : ff_sum / static_cast<double>(ff_n);
    if (bin_n > 0) report.mean_binary_brier = bin_sum / static_cast<double>(bin_n);
    report.calibration = scoring::calibration_curve(graded, meta.calibration_bins);
    report.monthly = monthly_breakdown(records);
    return report;
}

Result<std::vector<PredictionRecord>> load_prediction_log(const std::filesystem::path& path) {
    std::vector<PredictionRecord> records;
    auto stats = jsonl::for_each(path, [&](size_t, const json& j) {
        records.push_back(prediction_record_from_json(j));
    });
    if (!stats.ok()) return Result<std::vector<PredictionRecord>>::failure(stats.error());
    return records;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << std::fixed << v;
    return os.str();
}

std::string csv_optional(const std::optional<double>& v) {
    if (!v) return "";
    std::ostringstream os;
    os.precision(10);
    os << *v;
    return os.str();
}

}  // namespace

std::string render_report_table(const EvalReport& report) {
    std::ostringstream os;
    os << "dataset:              " << report.dataset_id << "\n";
    os << "samples:              " << report.n_samples << "\n";
    os << "attempts per sample:  " << report.attempts_per_sample << "\n";
    os << "retrieval k:          " << report.retrieval_k << "\n";
    os << "grader:               " << report.grader << "\n";
    os << "accuracy (avg@" << report.attempts_per_sample << "):    " << fmt(report.accuracy)
       << "\n";
    os << "mean free-form brier: " << fmt(report.mean_freeform_brier) << "\n";
    if (report.mean_binary_brier) {
        os << "mean binary brier:    " << fmt(*report.mean_binary_brier) << "\n";
    }
    if (report.failed_predictions > 0) {
        os << "FAILED predictions:   " << report.failed_predictions
           << " (excluded from all means)\n";
    }
    if (!report.monthly.empty()) {
        os << "\nmonth      n    accuracy  brier\n";
        for (const auto& m : report.monthly) {
            os << m.month << "  ";
            std::string n = std::to_string(m.n);
            os << n;
            os << std::string(n.size() < 4 ? 4 - n.size() : 1, ' ');
            os << " " << fmt(m.accuracy) << "    " << fmt(m.brier) << "\n";
        }
    }
    os << "\ncalibration (" << report.calibration.size() << " bins)\n";
    os << "bin            count  confidence  accuracy\n";
    for (const auto& b : report.calibration) {
        std::ostringstream bin;
        bin.precision(2);
        bin << std::fixed << "[" << b.bin_low << "," << b.bin_high << "]";
        std::string label = bin.str();
        os << label << std::string(label.size() < 13 ? 13 - label.size() : 1, ' ');
        std::string cnt = std::to_string(b.count);
        os << cnt << std::string(cnt.size() < 7 ? 7 - cnt.size() : 1, ' ');
        os << (b.mean_confidence ? fmt(*b.mean_confidence) : "     -") << "      ";
        os << (b.empirical_accuracy ? fmt(*b.empirical_accuracy) : "-") << "\n";
    }
    return os.str();
}

Status report_render(const EvalReport& report, ReportFormat format,
                     const std::filesystem::path& out_path) {
    if (out_path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(out_path.parent_path(), ec);
    }
    switch (format) {
        case ReportFormat::json: {
            std::ofstream out(out_path, std::ios::trunc);
            if (!out.is_open()) return Status::failure("cannot write " + out_path.string());
            out << to_json(report).dump(2) << '\n';
            return Status::success();
        }
        case ReportFormat::table: {
            std::ofstream out(out_path, std::ios::trunc);
            if (!out.is_open()) return Status::failure("cannot write " + out_path.string());
            out << render_report_table(report);
            return Status::success();
        }
        case ReportFormat::plotdata: {
            std::filesystem::path base = out_path;
            base.replace_extension();
            std::ofstream cal(base.string() + "_calibration.csv", std::ios::trunc);
            if (!cal.is_open()) return Status::failure("cannot write calibration csv");
            cal << "bin_low,bin_high,count,mean_confidence,empirical_accuracy\n";
            for (const auto& b : report.calibration) {
                if (b.count == 0) continue;
                cal << b.bin_low << ',' << b.bin_high << ',' << b.count << ','
                    << csv_optional(b.mean_confidence) << ',' << csv_optional(b.empirical_accuracy)
                    << '\n';
            }
            std::ofstream scatter(base.string() + "_scatter.csv", std::ios::trunc);
            if (!scatter.is_open()) return Status::failure("cannot write scatter csv");
            scatter << "label,n,accuracy,brier\n";
            scatter << "overall," << report.n_samples << ',' << report.accuracy << ','
                    << report.mean_freeform_brier << '\n';
            for (const auto& m : report.monthly) {
                scatter << m.month << ',' << m.n << ',' << m.accuracy << ',' << m.brier << '\n';
            }
            return Status::success();
        }
    }
    return Status::failure("unknown report format");
}

}  // namespace nf::harness
