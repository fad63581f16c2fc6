// newsforecast command-line interface: corpus ingestion, retrieval index
// builds, question generation, filtering, evaluation, grading, reward
// computation, and report rendering.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>

#include "nf/common/jsonl.h"
#include "nf/corpus/ingest.h"
#include "nf/gateway/client.h"
#include "nf/gateway/parsers.h"
#include "nf/harness/config.h"
#include "nf/harness/evaluate.h"
#include "nf/harness/prompt.h"
#include "nf/harness/report.h"
#include "nf/qgen/pipeline.h"
#include "nf/retrieval/index.h"
#include "nf/reward/reward.h"
#include "nf/scoring/brier.h"
#include "nf/scoring/matching.h"

namespace {

using nf::Date;
using nf::harness::Config;
namespace fs = std::filesystem;

struct GlobalArgs {
    std::string config_path;
    std::string cache_dir;
    bool replay_only = false;
    bool strict = false;
    int64_t seed = -1;
};

Config load_config(const GlobalArgs& g) {
    Config cfg = g.config_path.empty() ? Config{} : Config::load(g.config_path);
    if (!g.cache_dir.empty()) cfg.cache_dir = g.cache_dir;
    if (g.replay_only) cfg.replay_only = true;
    if (g.strict) cfg.strict = true;
    if (g.seed >= 0) cfg.seed = static_cast<uint64_t>(g.seed);
    return cfg;
}

std::shared_ptr<nf::gateway::Transport> make_transport(const Config& cfg) {
    if (cfg.replay_only) {
        // Replay runs must not touch the network at all.
        return std::make_shared<nf::gateway::DeniedTransport>();
    }
    return std::make_shared<nf::gateway::HttpTransport>();
}

std::vector<nf::qgen::ForecastSample> load_samples(const fs::path& path) {
    std::vector<nf::qgen::ForecastSample> samples;
    auto stats = nf::jsonl::for_each(path, [&](size_t, const nlohmann::json& j) {
        samples.push_back(nf::qgen::sample_from_json(j));
    });
    if (!stats.ok()) throw std::runtime_error(stats.error());
    return samples;
}

void write_samples(const std::vector<nf::qgen::ForecastSample>& samples, const fs::path& path) {
    nf::jsonl::Writer out(path);
    if (!out.ok()) throw std::runtime_error("cannot write " + path.string());
    for (const auto& s : samples) out.write(nf::qgen::to_json(s));
}

void write_reports(const std::vector<nf::qgen::StageReport>& reports, const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out.is_open()) throw std::runtime_error("cannot write " + path.string());
    out << nf::qgen::to_json(reports).dump(2) << '\n';
}

int run_ingest(const Config& cfg, const std::vector<std::string>& inputs,
               const std::string& output, const std::string& window_start,
               const std::string& window_end, const std::string& language) {
    nf::corpus::Deduper deduper;
    std::vector<nf::corpus::Article> kept;
    nf::corpus::IngestCounters totals;

    for (const auto& input : inputs) {
        auto counters = nf::corpus::ingest(input, cfg.ingest_mapping, [&](nf::corpus::Article&& a) {
            if (deduper.admit(a)) kept.push_back(std::move(a));
        });
        if (!counters.ok()) {
            std::cerr << "ingest failed: " << counters.error() << "\n";
            return 1;
        }
        totals.lines += counters.value().lines;
        totals.yielded += counters.value().yielded;
        for (const auto& [k, v] : counters.value().skipped) totals.skipped[k] += v;
    }

    if (!window_start.empty() || !window_end.empty()) {
        auto start = Date::parse_iso(window_start);
        auto end = Date::parse_iso(window_end);
        if (!start || !end) {
            std::cerr << "ingest: --window-start/--window-end must be YYYY-MM-DD\n";
            return 1;
        }
        kept = nf::corpus::filter_window(kept, *start, *end, language);
    }

    nf::jsonl::Writer out(output);
    if (!out.ok()) {
        std::cerr << "cannot write " << output << "\n";
        return 1;
    }
    for (const auto& a : kept) out.write(nf::corpus::to_json(a));

    std::cout << "lines:           " << totals.lines << "\n";
    std::cout << "parsed articles: " << totals.yielded << "\n";
    std::cout << "url duplicates:  " << deduper.url_duplicates() << "\n";
    std::cout << "content dups:    " << deduper.content_duplicates() << "\n";
    for (const auto& [k, v] : totals.skipped) std::cout << "skipped " << k << ": " << v << "\n";
    std::cout << "written:         " << kept.size() << " -> " << output << "\n";
    return 0;
}

int run_build_index(const Config& cfg, const std::string& articles_path,
                    const std::string& output) {
    auto articles = nf::corpus::load_articles(articles_path);
    if (!articles.ok()) {
        std::cerr << "cannot read articles: " << articles.error() << "\n";
        return 1;
    }

    nf::retrieval::WhitespaceTokenizer tokenizer;
    std::vector<nf::retrieval::Chunk> chunks;
    std::map<std::string, nf::retrieval::ArticleMeta> meta;
    for (const auto& a : articles.value()) {
        meta[a.id] = {a.title, a.source, a.url, a.publish_date};
        for (auto& c : nf::retrieval::chunk_article(a, cfg.retrieval.chunk_tokens, tokenizer)) {
            chunks.push_back(std::move(c));
        }
    }
    std::cout << "chunking: " << articles.value().size() << " articles -> " << chunks.size()
              << " chunks (budget " << cfg.retrieval.chunk_tokens << ")\n";

    auto transport = make_transport(cfg);
    auto cache = std::make_shared<nf::gateway::DiskCache>(cfg.cache_dir);
    auto embedder = cfg.make_client(nf::gateway::ModelRole::embedder, transport, cache);

    auto index = nf::retrieval::Index::build(std::move(chunks), std::move(meta), embedder);
    if (!index.ok()) {
        std::cerr << index.error() << "\n";
        return 1;
    }
    auto saved = index.value().save(output);
    if (!saved.ok()) {
        std::cerr << saved.error() << "\n";
        return 1;
    }
    std::cout << "index: " << index.value().size() << " chunks, dimension "
              << index.value().dimension() << " -> " << output << "\n";
    return 0;
}

int run_generate(const Config& cfg, const std::string& articles_path, const std::string& output,
                 const std::string& reports_path) {
    auto articles = nf::corpus::load_articles(articles_path);
    if (!articles.ok()) {
        std::cerr << "cannot read articles: " << articles.error() << "\n";
        return 1;
    }
    auto transport = make_transport(cfg);
    auto cache = std::make_shared<nf::gateway::DiskCache>(cfg.cache_dir);
    auto creator = cfg.make_client(nf::gateway::ModelRole::creator, transport, cache);
    auto selector = cfg.make_client(nf::gateway::ModelRole::selector, transport, cache);
    nf::qgen::TemplateStore templates(cfg.templates_dir);

    auto result = nf::qgen::run_pipeline(articles.value(), creator, selector, cfg.pipeline,
                                         templates);
    write_samples(result.samples, output);
    if (!reports_path.empty()) write_reports(result.reports, reports_path);

    std::cout << nf::qgen::render_stage_table(result.reports) << "\n";
    for (const auto& [k, v] : result.counters.counts) {
        std::cout << "counter " << k << ": " << v << "\n";
    }
    std::cout << "samples -> " << output << "\n";
    return 0;
}

int run_filter(const Config& cfg, const std::string& samples_path, const std::string& output,
               const std::string& reports_path, const std::string& threshold_str) {
    auto samples = load_samples(samples_path);
    Date threshold = cfg.pipeline.resolution_threshold;
    if (!threshold_str.empty()) {
        auto t = Date::parse_iso(threshold_str);
        if (!t) {
            std::cerr << "filter: --threshold must be YYYY-MM-DD\n";
            return 1;
        }
        threshold = *t;
    }

    // The content filters target generated free-form questions; binary
    // (prediction-market) samples enter the dataset separately and only the
    // resolution cutoff applies to them.
    auto is_binary = [](const nf::qgen::ForecastSample& s) {
        return s.kind == nf::qgen::QuestionKind::binary;
    };

    std::vector<nf::qgen::StageReport> reports;
    size_t in_count = samples.size();
    std::vector<nf::qgen::ForecastSample> stage;
    for (const auto& s : samples) {
        if (is_binary(s) || nf::qgen::string_leak_filter(s, cfg.pipeline.token_leak_check)) {
            stage.push_back(s);
        }
    }
    reports.push_back({"String Leak Filter", in_count, stage.size()});

    std::vector<nf::qgen::ForecastSample> typed;
    for (const auto& s : stage) {
        if (is_binary(s) || nf::qgen::answer_type_filter(s)) typed.push_back(s);
    }
    reports.push_back({"Answer Type Filtering", stage.size(), typed.size()});

    std::vector<nf::qgen::ForecastSample> kept;
    for (const auto& s : typed) {
        if (nf::qgen::resolution_cutoff_filter(s, threshold)) kept.push_back(s);
    }
    reports.push_back({"Resolving after " + threshold.iso(), typed.size(), kept.size()});

    write_samples(kept, output);
    if (!reports_path.empty()) write_reports(reports, reports_path);
    std::cout << nf::qgen::render_stage_table(reports) << "\n";
    std::cout << "kept " << kept.size() << " of " << in_count << " -> " << output << "\n";
    return 0;
}

int run_evaluate(const Config& cfg, const std::string& samples_path, const std::string& index_path,
                 const std::string& report_path, const std::string& predictions_path,
                 const std::string& dataset_id, int attempts, int k, bool with_retrieval,
                 bool without_retrieval) {
    auto samples = load_samples(samples_path);

    auto transport = make_transport(cfg);
    auto cache = std::make_shared<nf::gateway::DiskCache>(cfg.cache_dir);
    auto forecaster = cfg.make_client(nf::gateway::ModelRole::forecaster, transport, cache);
    auto grader = cfg.make_client(nf::gateway::ModelRole::grader, transport, cache);

    nf::harness::EvalOptions options;
    options.dataset_id = dataset_id.empty() ? samples_path : dataset_id;
    options.attempts_per_sample = attempts > 0 ? attempts : cfg.eval.attempts_per_sample;
    options.with_retrieval = cfg.eval.with_retrieval;
    if (with_retrieval) options.with_retrieval = true;
    if (without_retrieval) options.with_retrieval = false;
    options.k = k > 0 ? k : cfg.retrieval.k;
    options.calibration_bins = cfg.eval.calibration_bins;
    options.strict = cfg.strict;
    options.cutoff_date_field = cfg.retrieval.cutoff_date_field;
    options.workers = cfg.eval.workers;

    std::optional<nf::retrieval::Index> index;
    std::optional<nf::gateway::Client> embedder;
    nf::harness::EvalClients clients{&forecaster, &grader, nullptr};
    if (options.with_retrieval) {
        if (index_path.empty()) {
            std::cerr << "evaluate: retrieval requested but no --index given\n";
            return 1;
        }
        auto loaded = nf::retrieval::Index::load(index_path);
        if (!loaded.ok()) {
            std::cerr << loaded.error() << "\n";
            return 1;
        }
        index = std::move(loaded).take();
        embedder.emplace(cfg.make_client(nf::gateway::ModelRole::embedder, transport, cache));
        clients.embedder = &*embedder;
    }

    nf::qgen::TemplateStore templates(cfg.templates_dir);
    std::optional<fs::path> pred_out;
    if (!predictions_path.empty()) pred_out = predictions_path;

    auto outcome = nf::harness::evaluate(samples, clients, index ? &*index : nullptr, options,
                                         templates, pred_out);
    if (!outcome.ok()) {
        std::cerr << "evaluate failed: " << outcome.error() << "\n";
        return 1;
    }
    auto rendered = nf::harness::report_render(outcome.value().report,
                                               nf::harness::ReportFormat::json, report_path);
    if (!rendered.ok()) {
        std::cerr << rendered.error() << "\n";
        return 1;
    }
    std::cout << nf::harness::render_report_table(outcome.value().report);
    std::cout << "report -> " << report_path << "\n";
    std::cout << "network requests: " << transport->requests_made() << "\n";
    return 0;
}

int run_score(const Config& cfg, const std::string& predictions_path,
              const std::string& samples_path, const std::string& report_path,
              const std::string& graded_out) {
    auto samples = load_samples(samples_path);
    std::map<std::string, nf::qgen::ForecastSample> by_id;
    for (const auto& s : samples) by_id[s.sample_id] = s;

    auto records = nf::harness::load_prediction_log(predictions_path);
    if (!records.ok()) {
        std::cerr << records.error() << "\n";
        return 1;
    }

    auto transport = make_transport(cfg);
    auto cache = std::make_shared<nf::gateway::DiskCache>(cfg.cache_dir);
    auto grader = cfg.make_client(nf::gateway::ModelRole::grader, transport, cache);

    std::vector<nf::harness::PredictionRecord> regraded;
    for (auto r : records.value()) {
        auto sample_it = by_id.find(r.sample_id);
        if (sample_it == by_id.end()) {
            r.status = "grade_error";
            r.error = "sample not found: " + r.sample_id;
            regraded.push_back(std::move(r));
            continue;
        }
        const auto& sample = sample_it->second;
        auto parsed = nf::gateway::parse_prediction(r.raw_response);
        if (!parsed.ok()) {
            r.status = "parse_error";
            r.error = parsed.error();
            regraded.push_back(std::move(r));
            continue;
        }
        auto verdict = nf::scoring::match_answers(parsed.value().answer, sample.answer, grader);
        if (!verdict.ok()) {
            if (cfg.strict) {
                std::cerr << "grading failed: " << verdict.error() << "\n";
                return 1;
            }
            r.status = "grade_error";
            r.error = verdict.error();
            regraded.push_back(std::move(r));
            continue;
        }
        r.status = "ok";
        r.error.clear();
        r.answer = parsed.value().answer;
        r.probability = parsed.value().probability;
        r.probability_clamped = parsed.value().probability_clamped;
        r.correct = verdict.value();
        r.freeform_brier = nf::scoring::freeform_brier(r.probability, r.correct);
        if (sample.kind == nf::qgen::QuestionKind::binary) {
            r.binary_brier = nf::scoring::binary_brier_from_correctness(r.probability, r.correct);
        } else {
            r.binary_brier.reset();
        }
        regraded.push_back(std::move(r));
    }

    if (!graded_out.empty()) {
        nf::jsonl::Writer out(graded_out);
        for (const auto& r : regraded) out.write(nf::harness::to_json(r));
    }

    nf::harness::ReportMeta meta;
    meta.dataset_id = samples_path;
    meta.calibration_bins = cfg.eval.calibration_bins;
    meta.grader = grader.config().model;
    auto report = nf::harness::recompute_report(regraded, meta);
    auto rendered = nf::harness::report_render(report, nf::harness::ReportFormat::json, report_path);
    if (!rendered.ok()) {
        std::cerr << rendered.error() << "\n";
        return 1;
    }
    std::cout << nf::harness::render_report_table(report);
    return 0;
}

int run_reward(const Config& cfg, const std::string& predictions_path,
               const std::string& samples_path, const std::string& index_path,
               const std::string& output, const std::string& mode_str, int group_size) {
    auto samples = load_samples(samples_path);
    std::map<std::string, nf::qgen::ForecastSample> by_id;
    for (const auto& s : samples) by_id[s.sample_id] = s;

    auto records = nf::harness::load_prediction_log(predictions_path);
    if (!records.ok()) {
        std::cerr << records.error() << "\n";
        return 1;
    }

    auto mode = nf::reward::mode_from_name(mode_str.empty() ? cfg.reward.mode : mode_str);
    if (!mode) {
        std::cerr << "reward: unknown mode\n";
        return 1;
    }
    int k_group = group_size > 0 ? group_size : cfg.reward.group_size;

    // Group graded records by sample, in input order.
    std::map<std::string, std::vector<nf::harness::PredictionRecord>> grouped;
    std::vector<std::string> order;
    for (const auto& r : records.value()) {
        if (!r.graded()) continue;
        if (grouped.find(r.sample_id) == grouped.end()) order.push_back(r.sample_id);
        grouped[r.sample_id].push_back(r);
    }

    std::optional<nf::retrieval::Index> index;
    std::optional<nf::gateway::Client> embedder;
    auto transport = make_transport(cfg);
    auto cache = std::make_shared<nf::gateway::DiskCache>(cfg.cache_dir);
    if (!index_path.empty()) {
        auto loaded = nf::retrieval::Index::load(index_path);
        if (!loaded.ok()) {
            std::cerr << loaded.error() << "\n";
            return 1;
        }
        index = std::move(loaded).take();
        embedder.emplace(cfg.make_client(nf::gateway::ModelRole::embedder, transport, cache));
    }

    nf::qgen::TemplateStore templates(cfg.templates_dir);
    std::mt19937_64 rng(cfg.seed);

    std::vector<nf::reward::RewardGroup> groups;
    std::vector<std::string> prompts;
    for (const auto& sample_id : order) {
        auto sample_it = by_id.find(sample_id);
        if (sample_it == by_id.end()) {
            std::cerr << "reward: skipping unknown sample " << sample_id << "\n";
            continue;
        }
        const auto& sample = sample_it->second;
        auto& rs = grouped[sample_id];
        if (static_cast<int>(rs.size()) != k_group) {
            std::cerr << "reward: sample " << sample_id << " has " << rs.size()
                      << " completions, expected K=" << k_group << "; skipping\n";
            continue;
        }

        std::vector<nf::reward::Completion> completions;
        for (const auto& r : rs) {
            nf::reward::Completion c;
            c.prediction.answer = r.answer;
            c.prediction.probability = r.probability;
            c.prediction.raw_response = r.raw_response;
            c.prediction.sample_id = r.sample_id;
            c.correct = r.correct;
            completions.push_back(std::move(c));
        }
        // Binary questions train on the brier term alone.
        nf::reward::RewardMode sample_mode = sample.kind == nf::qgen::QuestionKind::binary
                                                 ? nf::reward::RewardMode::brier
                                                 : *mode;
        groups.push_back(nf::reward::make_reward_group(sample_id, std::move(completions),
                                                       sample_mode, sample.kind));

        // Training prompts carry a random number of retrieved chunks so the
        // forecaster generalizes across context sizes.
        std::vector<nf::harness::RetrievedChunk> retrieved;
        if (index) {
            int n_chunks = nf::reward::sample_chunk_count(rng, cfg.reward.max_chunks);
            if (n_chunks > 0) {
                Date cutoff = nf::harness::sample_cutoff(sample, cfg.retrieval.cutoff_date_field);
                auto hits = index->query(nf::harness::retrieval_query_text(sample), cutoff,
                                         n_chunks, *embedder);
                if (hits.ok()) {
                    for (const auto& h : hits.value()) {
                        const auto& c = index->chunk(h.chunk_index);
                        const auto* meta = index->article(c.article_id);
                        retrieved.push_back({c, meta ? *meta : nf::retrieval::ArticleMeta{}});
                    }
                }
            }
            prompts.push_back(nf::harness::build_prompt(sample, retrieved, true, templates));
        } else {
            prompts.push_back(nf::harness::build_prompt(sample, {}, false, templates));
        }
    }

    // Mixed free-form/binary batches are interleaved by one global shuffle.
    auto order_idx = nf::reward::shuffled_order(groups.size(), cfg.seed);
    std::vector<nf::reward::RewardGroup> shuffled_groups;
    std::vector<std::string> shuffled_prompts;
    for (size_t i : order_idx) {
        shuffled_groups.push_back(groups[i]);
        shuffled_prompts.push_back(prompts[i]);
    }

    auto emitted = nf::reward::emit_training_batch(shuffled_groups, shuffled_prompts, output);
    if (!emitted.ok()) {
        std::cerr << emitted.error() << "\n";
        return 1;
    }
    std::cout << "training batch: " << shuffled_groups.size() << " groups (K=" << k_group
              << ") -> " << output << "\n";
    return 0;
}

int run_report(const std::string& report_path, const std::string& format_str,
               const std::string& output) {
    std::ifstream in(report_path);
    if (!in.is_open()) {
        std::cerr << "cannot open " << report_path << "\n";
        return 1;
    }
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) {
        std::cerr << "report is not valid JSON\n";
        return 1;
    }
    auto report = nf::harness::report_from_json(j);

    nf::harness::ReportFormat format;
    if (format_str == "json") {
        format = nf::harness::ReportFormat::json;
    } else if (format_str == "table") {
        format = nf::harness::ReportFormat::table;
    } else if (format_str == "plotdata") {
        format = nf::harness::ReportFormat::plotdata;
    } else {
        std::cerr << "report: format must be json, table, or plotdata\n";
        return 1;
    }
    auto rendered = nf::harness::report_render(report, format, output);
    if (!rendered.ok()) {
        std::cerr << rendered.error() << "\n";
        return 1;
    }
    std::cout << "rendered " << format_str << " -> " << output << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"news-to-forecasting pipeline: question synthesis, leak-safe retrieval, "
                 "free-form Brier scoring, RL rewards, and evaluation reports"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "YAML config file");
    app.add_option("--cache-dir", g.cache_dir, "model response cache directory");
    app.add_flag("--replay-only", g.replay_only, "serve every model call from cache; error on miss");
    app.add_flag("--strict", g.strict, "fail the run on any parse/transport/grading error");
    app.add_option("--seed", g.seed, "seed for randomized choices (chunk counts, shuffles)");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "normalize, dedup, and window-filter article JSONL");
    std::vector<std::string> ingest_inputs;
    std::string ingest_output = "articles.jsonl", window_start, window_end, language = "en";
    ingest->add_option("--input", ingest_inputs, "input JSONL file(s)")->required();
    ingest->add_option("--output", ingest_output, "output articles JSONL");
    ingest->add_option("--window-start", window_start, "earliest publish date (YYYY-MM-DD)");
    ingest->add_option("--window-end", window_end, "latest publish date (YYYY-MM-DD)");
    ingest->add_option("--language", language, "language filter (BCP-47 primary subtag)");

    // build-index
    auto* build_index = app.add_subcommand("build-index", "chunk, embed, and index articles");
    std::string bi_articles, bi_output = "index.bin";
    build_index->add_option("--articles", bi_articles, "articles JSONL")->required();
    build_index->add_option("--output", bi_output, "index file path");

    // generate
    auto* generate = app.add_subcommand("generate", "run the question-synthesis pipeline");
    std::string gen_articles, gen_output = "samples.jsonl", gen_reports = "stage_reports.json";
    generate->add_option("--articles", gen_articles, "articles JSONL")->required();
    generate->add_option("--output", gen_output, "samples JSONL");
    generate->add_option("--reports", gen_reports, "stage reports JSON");

    // filter
    auto* filter = app.add_subcommand("filter", "re-run content filters on existing samples");
    std::string f_samples, f_output = "filtered.jsonl", f_reports, f_threshold;
    filter->add_option("--samples", f_samples, "samples JSONL")->required();
    filter->add_option("--output", f_output, "filtered samples JSONL");
    filter->add_option("--reports", f_reports, "stage reports JSON");
    filter->add_option("--threshold", f_threshold, "resolution cutoff date (YYYY-MM-DD)");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "forecast, grade, and aggregate a dataset");
    std::string e_samples, e_index, e_report = "report.json", e_predictions = "predictions.jsonl";
    std::string e_dataset;
    int e_attempts = 0, e_k = 0;
    bool e_with_retrieval = false, e_without_retrieval = false;
    evaluate->add_option("--samples", e_samples, "samples JSONL")->required();
    evaluate->add_option("--index", e_index, "retrieval index path");
    evaluate->add_option("--output", e_report, "eval report JSON");
    evaluate->add_option("--predictions", e_predictions, "per-prediction JSONL log");
    evaluate->add_option("--dataset-id", e_dataset, "dataset identifier in the report");
    evaluate->add_option("--attempts", e_attempts, "attempts per sample (avg@N)");
    evaluate->add_option("--k", e_k, "retrieved chunks per question");
    evaluate->add_flag("--with-retrieval", e_with_retrieval, "force retrieval on");
    evaluate->add_flag("--without-retrieval", e_without_retrieval, "force retrieval off");

    // score
    auto* score = app.add_subcommand("score", "re-parse and re-grade an existing prediction log");
    std::string s_predictions, s_samples, s_report = "report.json", s_graded;
    score->add_option("--predictions", s_predictions, "per-prediction JSONL")->required();
    score->add_option("--samples", s_samples, "samples JSONL")->required();
    score->add_option("--output", s_report, "eval report JSON");
    score->add_option("--graded", s_graded, "re-graded per-prediction JSONL");

    // reward
    auto* reward = app.add_subcommand("reward", "compute rewards/advantages, emit a training batch");
    std::string r_predictions, r_samples, r_index, r_output = "training_batch.jsonl", r_mode;
    int r_group_size = 0;
    reward->add_option("--predictions", r_predictions, "graded per-prediction JSONL")->required();
    reward->add_option("--samples", r_samples, "samples JSONL")->required();
    reward->add_option("--index", r_index, "retrieval index (prompts get 0..max random chunks)");
    reward->add_option("--output", r_output, "training batch JSONL");
    reward->add_option("--mode", r_mode, "accuracy | brier | accuracy_plus_brier");
    reward->add_option("--group-size", r_group_size, "completions per sample (K)");

    // report
    auto* report = app.add_subcommand("report", "render an eval report");
    std::string rp_report, rp_format = "table", rp_output = "report.txt";
    report->add_option("--report", rp_report, "eval report JSON")->required();
    report->add_option("--format", rp_format, "json | table | plotdata");
    report->add_option("--output", rp_output, "output path");

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg = load_config(g);
        if (ingest->parsed()) {
            return run_ingest(cfg, ingest_inputs, ingest_output, window_start, window_end,
                              language);
        }
        if (build_index->parsed()) return run_build_index(cfg, bi_articles, bi_output);
        if (generate->parsed()) return run_generate(cfg, gen_articles, gen_output, gen_reports);
        if (filter->parsed()) return run_filter(cfg, f_samples, f_output, f_reports, f_threshold);
        if (evaluate->parsed()) {
            return run_evaluate(cfg, e_samples, e_index, e_report, e_predictions, e_dataset,
                                e_attempts, e_k, e_with_retrieval, e_without_retrieval);
        }
        if (score->parsed()) return run_score(cfg, s_predictions, s_samples, s_report, s_graded);
        if (reward->parsed()) {
            return run_reward(cfg, r_predictions, r_samples, r_index, r_output, r_mode,
                              r_group_size);
        }
        if (report->parsed()) return run_report(rp_report, rp_format, rp_output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
