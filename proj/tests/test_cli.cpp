#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// End-to-end exercise of the installed binary: every subcommand runs against
// a local OpenAI-compatible mock server, then evaluate is replayed from cache
// with the server stopped.

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "nf/common/jsonl.h"
#include "nf/harness/report.h"
#include "nf/reward/reward.h"
#include "pipeline_mock.h"
#include "support.h"

using json = nlohmann::json;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(NF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

size_t count_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::string line;
    size_t n = 0;
    while (std::getline(in, line)) ++n;
    return n;
}

}  // namespace

TEST_CASE("cli: full flow ingest -> index -> generate -> evaluate -> reward -> report") {
    auto dir = nftest::scratch_dir("cli");

    // Pipeline mocks: one valid question per article, no leaks, all kept.
    nftest::PipelineRules rules;
    rules.questions_per_article = 2;
    rules.valid = [](int i, int j) { return (i + j) % 2 == 0; };
    auto publish_of = [](int) { return nf::Date(2025, 3, 15); };

    auto creator_fn = nftest::mock_creator(rules, publish_of);
    auto selector_fn = nftest::mock_selector(rules);

    httplib::Server srv;
    srv.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        auto body = json::parse(req.body);
        std::string prompt = body["messages"][0]["content"];
        std::string content;
        if (prompt.find("DIVERSE forecasting questions") != std::string::npos) {
            content = creator_fn(prompt);
        } else if (prompt.find("forecasting question (which might be from the past)") !=
                   std::string::npos) {
            // Forecaster: always names the right panelist with q=0.8.
            int i = nftest::marker_after(prompt, "panel ");
            content = "<answer>" + nftest::mock_answer(i) +
                      "</answer> <probability>0.8</probability>";
        } else if (prompt.find("grading a short free-form answer") != std::string::npos) {
            content = "<answer>1</answer>";
        } else {
            content = selector_fn(prompt);
        }
        json out = {{"choices", json::array({{{"message", {{"content", content}}}}})}};
        res.set_content(out.dump(), "application/json");
    });
    srv.Post("/v1/embeddings", [&](const httplib::Request& req, httplib::Response& res) {
        auto body = json::parse(req.body);
        json data = json::array();
        size_t i = 0;
        for (const auto& text : body["input"]) {
            data.push_back({{"embedding", nftest::hash_embedding(text.get<std::string>(), 8)},
                            {"index", i++}});
        }
        res.set_content(json{{"data", data}}.dump(), "application/json");
    });
    int port = srv.bind_to_any_port("127.0.0.1");
    std::thread server_thread([&] { srv.listen_after_bind(); });
    srv.wait_until_ready();
    std::string endpoint = "http://127.0.0.1:" + std::to_string(port);

    // Raw article JSONL (one duplicate url, one out-of-window record).
    {
        std::ofstream raw(dir / "raw.jsonl");
        for (int i = 0; i < 6; ++i) {
            auto a = nftest::mock_article(i, publish_of(i));
            raw << json{{"url", a.url},
                        {"date", a.publish_date.iso()},
                        {"title", a.title},
                        {"body", a.body}}
                       .dump()
                << "\n";
        }
        auto dup = nftest::mock_article(0, publish_of(0));
        raw << json{{"url", dup.url},
                    {"date", dup.publish_date.iso()},
                    {"title", dup.title},
                    {"body", dup.body}}
                   .dump()
            << "\n";
        raw << json{{"url", "https://news.example/old"},
                    {"date", "2019-01-01"},
                    {"title", "too old"},
                    {"body", "panel 99 archive"}}
                   .dump()
            << "\n";
    }

    {
        std::ofstream cfg(dir / "config.yaml");
        cfg << "cache_dir: " << (dir / "cache").string() << "\n"
            << "templates_dir: " << nftest::templates_dir().string() << "\n"
            << "seed: 11\n"
            << "roles:\n"
            << "  creator: {model: mock-creator, endpoint: '" << endpoint << "'}\n"
            << "  selector: {model: mock-selector, endpoint: '" << endpoint << "'}\n"
            << "  grader: {model: mock-grader, endpoint: '" << endpoint << "'}\n"
            << "  forecaster: {model: mock-forecaster, endpoint: '" << endpoint << "'}\n"
            << "  embedder: {model: mock-embedder, endpoint: '" << endpoint << "'}\n"
            << "retrieval: {k: 3, chunk_tokens: 16}\n"
            << "pipeline: {questions_per_article: 2, resolution_threshold: 2024-01-01}\n";
    }
    const std::string base = "--config " + (dir / "config.yaml").string() + " ";

    // ingest: 7 lines in, 6 unique, window keeps the 2025 ones.
    REQUIRE(run_cli(base + "ingest --input " + (dir / "raw.jsonl").string() + " --output " +
                    (dir / "articles.jsonl").string() +
                    " --window-start 2023-06-01 --window-end 2025-04-30 --language en") == 0);
    CHECK(count_lines(dir / "articles.jsonl") == 6);

    // build-index
    REQUIRE(run_cli(base + "build-index --articles " + (dir / "articles.jsonl").string() +
                    " --output " + (dir / "index.bin").string()) == 0);
    CHECK(std::filesystem::exists(dir / "index.bin"));
    CHECK(std::filesystem::exists(dir / "index.bin.meta.json"));

    // generate: each article yields exactly one valid question.
    REQUIRE(run_cli(base + "generate --articles " + (dir / "articles.jsonl").string() +
                    " --output " + (dir / "samples.jsonl").string() + " --reports " +
                    (dir / "stage_reports.json").string()) == 0);
    CHECK(count_lines(dir / "samples.jsonl") == 6);
    {
        std::ifstream in(dir / "stage_reports.json");
        auto reports = json::parse(in);
        REQUIRE(reports.size() == 6);
        CHECK(reports[0]["output_count"] == 12);
        CHECK(reports[5]["output_count"] == 6);
    }

    // filter: clean free-form samples pass through; a binary sample is exempt
    // from the content filters (its "Yes" answer would trip the substring
    // rule on ordinary words); a numeric-answer sample is dropped.
    {
        std::ofstream mixed(dir / "mixed.jsonl", std::ios::app);
        std::ifstream orig(dir / "samples.jsonl");
        mixed << orig.rdbuf();
        mixed << json{{"sample_id", "bin1"},
                      {"question_title", "Will the committee approve the merger by June 2025?"},
                      {"background", "Analysts' eyes are on the committee."},
                      {"resolution_criteria",
                       {{"source_of_truth", "official record"},
                        {"resolution_date", "2025-06-30"},
                        {"answer_format", "Yes or No"},
                        {"raw_text", ""}}},
                      {"answer", "Yes"},
                      {"answer_type", "binary (yes/no)"},
                      {"question_kind", "binary"},
                      {"resolution_date_final", true}}
                     .dump()
              << "\n";
        mixed << json{{"sample_id", "num1"},
                      {"question_title", "How many seats will the party win by June 2025?"},
                      {"background", "Seat counts are tallied after the vote."},
                      {"resolution_criteria",
                       {{"source_of_truth", "election commission"},
                        {"resolution_date", "2025-06-30"},
                        {"answer_format", "integer"},
                        {"raw_text", ""}}},
                      {"answer", "42"},
                      {"answer_type", "numeric (integer)"},
                      {"question_kind", "freeform"},
                      {"resolution_date_final", true}}
                     .dump()
              << "\n";
    }
    REQUIRE(run_cli(base + "filter --samples " + (dir / "mixed.jsonl").string() + " --output " +
                    (dir / "filtered.jsonl").string()) == 0);
    CHECK(count_lines(dir / "filtered.jsonl") == 7);  // 6 freeform + binary; numeric dropped

    // evaluate with retrieval, 2 attempts per sample.
    REQUIRE(run_cli(base + "evaluate --samples " + (dir / "samples.jsonl").string() + " --index " +
                    (dir / "index.bin").string() + " --with-retrieval --attempts 2" +
                    " --output " + (dir / "report.json").string() + " --predictions " +
                    (dir / "preds.jsonl").string() + " --dataset-id cli-e2e") == 0);
    {
        std::ifstream in(dir / "report.json");
        auto report = nf::harness::report_from_json(json::parse(in));
        CHECK(report.n_samples == 6);
        CHECK(report.attempts_per_sample == 2);
        CHECK(report.accuracy == doctest::Approx(1.0));
        CHECK(report.retrieval_k == 3);
        CHECK(report.dataset_id == "cli-e2e");
    }
    CHECK(count_lines(dir / "preds.jsonl") == 12);

    // score: re-grade the log, report must agree on accuracy.
    REQUIRE(run_cli(base + "score --predictions " + (dir / "preds.jsonl").string() +
                    " --samples " + (dir / "samples.jsonl").string() + " --output " +
                    (dir / "rescore.json").string()) == 0);
    {
        std::ifstream in(dir / "rescore.json");
        auto report = nf::harness::report_from_json(json::parse(in));
        CHECK(report.accuracy == doctest::Approx(1.0));
    }

    // reward: K=2 groups from the 2-attempt log, prompts with random chunks.
    REQUIRE(run_cli(base + "reward --predictions " + (dir / "preds.jsonl").string() +
                    " --samples " + (dir / "samples.jsonl").string() + " --index " +
                    (dir / "index.bin").string() + " --group-size 2 --output " +
                    (dir / "batch.jsonl").string()) == 0);
    auto batch = nf::reward::parse_training_batch(dir / "batch.jsonl");
    REQUIRE(batch.ok());
    CHECK(batch.value().groups.size() == 6);
    for (const auto& g : batch.value().groups) {
        CHECK(g.group_size() == 2);
        double sum = 0.0;
        for (double a : g.advantages) sum += a;
        CHECK(std::abs(sum) <= 1e-9);
    }

    // report rendering to plot data.
    REQUIRE(run_cli(base + "report --report " + (dir / "report.json").string() +
                    " --format plotdata --output " + (dir / "plots.csv").string()) == 0);
    CHECK(std::filesystem::exists(dir / "plots_calibration.csv"));
    CHECK(std::filesystem::exists(dir / "plots_scatter.csv"));

    // Stop the server; a replay-only evaluate must still succeed from cache
    // and reproduce the report byte for byte.
    srv.stop();
    server_thread.join();

    REQUIRE(run_cli(base + "--replay-only evaluate --samples " + (dir / "samples.jsonl").string() +
                    " --index " + (dir / "index.bin").string() + " --with-retrieval --attempts 2" +
                    " --output " + (dir / "report_replay.json").string() + " --predictions " +
                    (dir / "preds_replay.jsonl").string() + " --dataset-id cli-e2e") == 0);
    CHECK(slurp(dir / "report_replay.json") == slurp(dir / "report.json"));
    CHECK(slurp(dir / "preds_replay.jsonl") == slurp(dir / "preds.jsonl"));

    // Replay of an unseen prompt must fail loudly, not reach for the network.
    {
        std::ofstream extra(dir / "extra.jsonl");
        extra << json{{"sample_id", "unseen"},
                      {"question_title", "Who will chair panel 777 session 0 by July 2025?"},
                      {"background", "bg"},
                      {"resolution_criteria",
                       {{"source_of_truth", "s"},
                        {"resolution_date", "2025-03-15"},
                        {"answer_format", "name"},
                        {"raw_text", ""}}},
                      {"answer", "Alice Zeta777"},
                      {"answer_type", "string (name)"},
                      {"question_kind", "freeform"},
                      {"resolution_date_final", true}}
                     .dump()
              << "\n";
    }
    CHECK(run_cli(base + "--replay-only --strict evaluate --samples " +
                  (dir / "extra.jsonl").string() + " --without-retrieval --output " +
                  (dir / "nope.json").string()) != 0);

    std::filesystem::remove_all(dir);
}
