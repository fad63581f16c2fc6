#include "nf/harness/evaluate.h"

#include <future>
#include <stdexcept>

#include "nf/common/jsonl.h"
#include "nf/gateway/parsers.h"
#include "nf/harness/prompt.h"
#include "nf/retrieval/chunker.h"
#include "nf/scoring/brier.h"
#include "nf/scoring/matching.h"

namespace nf::harness {

Date sample_cutoff(const qgen::ForecastSample& sample, const std::string& cutoff_date_field) {
    Date basis = sample.resolution_date();
    if (cutoff_date_field == "earliest_resolution_date" && sample.earliest_resolution_date) {
        basis = *sample.earliest_resolution_date;
    }
    return retrieval::cutoff_from_resolution(basis);
}

std::string retrieval_query_text(const qgen::ForecastSample& sample) {
    if (sample.background.empty()) return sample.question_title;
    return sample.question_title + "\n" + sample.background;
}

namespace {

PredictionRecord base_record(const qgen::ForecastSample& sample, int attempt) {
    PredictionRecord r;
    r.sample_id = sample.sample_id;
    r.attempt = attempt;
    r.question_kind = qgen::kind_name(sample.kind);
    r.resolution_date = sample.resolution_date().ok() ? sample.resolution_date().iso() : "";
    return r;
}

struct SampleResult {
    std::vector<PredictionRecord> records;
    std::string fatal;  // non-empty aborts the run in strict mode
};

SampleResult evaluate_sample(const qgen::ForecastSample& sample, const EvalClients& clients,
                             const retrieval::Index* index, const EvalOptions& options,
                             const qgen::TemplateStore& templates) {
    SampleResult out;

    std::vector<RetrievedChunk> retrieved;
    if (options.with_retrieval) {
        if (!sample.resolution_date().ok()) {
            if (options.strict) {
                out.fatal = "sample " + sample.sample_id +
                            " has no resolution date; cannot compute a cutoff";
                return out;
            }
            PredictionRecord r = base_record(sample, 0);
            r.status = "data_error";
            r.error = "missing resolution date";
            out.records.push_back(std::move(r));
            return out;
        }
        Date cutoff = sample_cutoff(sample, options.cutoff_date_field);
        auto hits =
            index->query(retrieval_query_text(sample), cutoff, options.k, *clients.embedder);
        if (!hits.ok()) {
            if (options.strict) {
                out.fatal = "retrieval failed: " + hits.error();
                return out;
            }
            PredictionRecord r = base_record(sample, 0);
            r.status = "transport_error";
            r.error = "retrieval failed: " + hits.error();
            out.records.push_back(std::move(r));
            return out;
        }
        for (const auto& h : hits.value()) {
            const retrieval::Chunk& c = index->chunk(h.chunk_index);
            const retrieval::ArticleMeta* meta = index->article(c.article_id);
            retrieved.push_back({c, meta ? *meta : retrieval::ArticleMeta{}});
        }
    }

    const std::string prompt = build_prompt(sample, retrieved, options.with_retrieval, templates);

    for (int attempt = 0; attempt < options.attempts_per_sample; ++attempt) {
        PredictionRecord r = base_record(sample, attempt);

        gateway::SamplingParams attempt_params;
        attempt_params.seed = attempt;
        auto response = clients.forecaster->complete(prompt, attempt_params);
        if (!response.ok()) {
            if (options.strict) {
                out.fatal = "forecaster failed: " + response.error();
                return out;
            }
            r.status = "transport_error";
            r.error = response.error();
            out.records.push_back(std::move(r));
            continue;
        }
        r.raw_response = response.value();

        auto parsed = gateway::parse_prediction(response.value());
        if (!parsed.ok()) {
            if (options.strict) {
                out.fatal = "parse failed: " + parsed.error();
                return out;
            }
            r.status = "parse_error";
            r.error = parsed.error();
            out.records.push_back(std::move(r));
            continue;
        }
        const scoring::Prediction& p = parsed.value();
        r.answer = p.answer;
        r.probability = p.probability;
        r.probability_clamped = p.probability_clamped;

        auto verdict = scoring::match_answers(p.answer, sample.answer, *clients.grader);
        if (!verdict.ok()) {
            if (options.strict) {
                out.fatal = "grading failed: " + verdict.error();
                return out;
            }
            r.status = "grade_error";
            r.error = verdict.error();
            out.records.push_back(std::move(r));
            continue;
        }
        r.correct = verdict.value();
        r.freeform_brier = scoring::freeform_brier(p.probability, r.correct);
        if (sample.kind == qgen::QuestionKind::binary) {
            r.binary_brier = scoring::binary_brier_from_correctness(p.probability, r.correct);
        }
        out.records.push_back(std::move(r));
    }
    return out;
}

}  // namespace

Result<EvalOutcome> evaluate(const std::vector<qgen::ForecastSample>& samples,
                             const EvalClients& clients, const retrieval::Index* index,
                             const EvalOptions& options, const qgen::TemplateStore& templates,
                             const std::optional<std::filesystem::path>& predictions_path) {
    using Out = Result<EvalOutcome>;
    if (!clients.forecaster || !clients.grader) {
        throw std::invalid_argument("evaluate: forecaster and grader clients are required");
    }
    if (options.with_retrieval && (!index || !clients.embedder)) {
        throw std::invalid_argument("evaluate: retrieval requires an index and an embedder");
    }
    if (options.attempts_per_sample < 1) {
        throw std::invalid_argument("evaluate: attempts_per_sample must be >= 1");
    }

    EvalOutcome outcome;
    std::optional<jsonl::Writer> log;
    if (predictions_path) {
        log.emplace(*predictions_path);
        if (!log->ok()) return Out::failure("cannot write " + predictions_path->string());
    }

    // Samples run in bounded-parallel batches; results merge in input order,
    // so the log and report are identical for any worker count.
    const size_t workers = static_cast<size_t>(std::max(1, options.workers));
    for (size_t start = 0; start < samples.size(); start += workers) {
        size_t end = std::min(samples.size(), start + workers);
        std::vector<std::future<SampleResult>> batch;
        for (size_t i = start; i < end; ++i) {
            batch.push_back(std::async(std::launch::async, [&, i] {
                return evaluate_sample(samples[i], clients, index, options, templates);
            }));
        }
        for (size_t i = start; i < end; ++i) {
            SampleResult result = batch[i - start].get();
            if (!result.fatal.empty()) return Out::failure(result.fatal);
            for (auto& r : result.records) {
                if (log) log->write(to_json(r));
                outcome.records.push_back(std::move(r));
            }
        }
    }

    ReportMeta meta;
    meta.dataset_id = options.dataset_id;
    meta.attempts_per_sample = options.attempts_per_sample;
    meta.calibration_bins = options.calibration_bins;
    meta.retrieval_k = options.with_retrieval ? options.k : 0;
    meta.grader = clients.grader->config().model;
    outcome.report = recompute_report(outcome.records, meta);
    return outcome;
}

}  // namespace nf::harness
