#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nf/qgen/pipeline.h"
#include "nf/qgen/templates.h"
#include "pipeline_mock.h"
#include "support.h"

using namespace nf;
using namespace nf::qgen;

namespace {

TemplateStore templates() { return TemplateStore(nftest::templates_dir()); }

corpus::Article plain_article() { return nftest::mock_article(0, Date(2025, 7, 10)); }

ForecastSample sample_with(const std::string& title, const std::string& background,
                           const std::string& answer, const std::string& answer_type,
                           const std::string& criteria_raw = "") {
    ForecastSample s;
    s.question_title = title;
    s.background = background;
    s.answer = answer;
    s.answer_type = answer_type;
    s.resolution.raw_text = criteria_raw;
    s.resolution.source_of_truth = "official source";
    s.resolution.answer_format = "name";
    s.resolution.resolution_date = Date(2025, 7, 1);
    s.sample_id = "s1";
    return s;
}

}  // namespace

TEST_CASE("stage templates render with placeholders substituted and braces unescaped") {
    auto store = templates();
    std::string p = store.render(kStageGenerate,
                                 {{"self.num_questions_per_article", "3"},
                                  {"self.num_questions_per_article - 1", "2"},
                                  {"source_article", "ARTICLE GOES HERE"}});
    CHECK(p.find("generate 3 high-quality") != std::string::npos);
    CHECK(p.find("ARTICLE GOES HERE") != std::string::npos);
    CHECK(p.find("<q3>") != std::string::npos);
    CHECK(p.find("<question_id>2</question_id>") != std::string::npos);
    // f-string style {{...}} escapes collapse to literal braces.
    CHECK(p.find("\"by {month_name}, {year}?\"") != std::string::npos);
    CHECK(p.find("{self.num_questions_per_article}") == std::string::npos);

    std::string v = store.render(kStageValidate,
                                 {{"source_article", "ART"}, {"questions_text", "QTEXT"}});
    CHECK(v.find("ONLY THENreturn <answer>1</answer>") != std::string::npos);
    CHECK(v.find("QTEXT") != std::string::npos);

    std::string s3 = store.render(kStageSelectBest, {{"questions_text", "QTEXT"}});
    CHECK(s3.find("NO GOOD QUESTION") != std::string::npos);

    std::string s4 = store.render(kStageFixLeakage, {{"questions_text", "QTEXT"}});
    CHECK(s4.find("{ analysis }") != std::string::npos);
    CHECK(s4.find("Leakage found -- {reason for leakage}") != std::string::npos);
}

TEST_CASE("generate_samples parses the documented example block to Bob Dylan") {
    auto store = templates();
    PipelineCounters counters;
    auto creator_transport = nftest::mock_transport([](const std::string&) {
        return std::string(
            "<q1>\n<question_id>0</question_id>\n"
            "<question_title>Who will win the Nobel Prize in Literature in 2016?"
            "</question_title>\n"
            "<background>Question Start Date: 10th January 2016. The Nobel Prize in Literature "
            "is awarded annually by the Swedish Academy.</background>\n"
            "<resolution_criteria>\n<ul>\n<li><b>Source of Truth</b>: NobelPrize.org press "
            "release.</li>\n<li><b>Resolution Date</b>: The resolution occurs when the laureates "
            "are formally named (typically mid-October 2016).</li>\n<li><b>Accepted Answer "
            "Format</b>: The full name of the laureate.</li>\n</ul>\n</resolution_criteria>\n"
            "<answer>Bob Dylan</answer>\n<answer_type>String (Name)</answer_type>\n</q1>");
    });
    auto creator = nftest::make_mock_client(gateway::ModelRole::creator, creator_transport);

    auto r = generate_samples(plain_article(), creator, store, 3, counters);
    REQUIRE(r.ok());
    REQUIRE(r.value().size() == 1);
    const auto& s = r.value()[0];
    CHECK(s.answer == "Bob Dylan");
    CHECK(s.answer_type == "String (Name)");
    CHECK(s.kind == QuestionKind::freeform);
    CHECK(s.resolution.resolution_date.iso() == "2016-10-31");
    CHECK(s.resolution.source_of_truth.find("NobelPrize.org") != std::string::npos);
    CHECK(s.source_article_id == plain_article().id);
}

TEST_CASE("generate_samples drops malformed blocks and keeps the rest") {
    auto store = templates();
    PipelineCounters counters;
    auto transport = nftest::mock_transport([](const std::string&) {
        return std::string(
            "<q1><question_title>Q one?</question_title><background>b</background>"
            "<resolution_criteria>by 2025-01-01</resolution_criteria>"
            "<answer>Alpha One</answer><answer_type>string (name)</answer_type></q1>"
            "<q2><question_title>Q two?</question_title><background>b</background>"
            "<answer>Beta Two</answer><answer_type>string (name)</answer_type></q2>"  // no criteria
            "<q3><question_title>Q three?</question_title><background>b</background>"
            "<resolution_criteria>by 2025-01-01</resolution_criteria>"
            "<answer>Gamma Three</answer><answer_type>string (name)</answer_type></q3>");
    });
    auto creator = nftest::make_mock_client(gateway::ModelRole::creator, transport);
    auto r = generate_samples(plain_article(), creator, store, 3, counters);
    REQUIRE(r.ok());
    CHECK(r.value().size() == 2);
    CHECK(counters.get("generation_malformed_blocks") == 1);
}

TEST_CASE("generate_samples: empty response and empty body") {
    auto store = templates();
    PipelineCounters counters;
    auto transport = nftest::mock_transport([](const std::string&) { return ""; });
    auto creator = nftest::make_mock_client(gateway::ModelRole::creator, transport);
    auto r = generate_samples(plain_article(), creator, store, 3, counters);
    REQUIRE(r.ok());
    CHECK(r.value().empty());

    corpus::Article empty = plain_article();
    empty.body.clear();
    CHECK_FALSE(generate_samples(empty, creator, store, 3, counters).ok());
}

TEST_CASE("generate_samples enforces the 3-word answer guideline") {
    auto store = templates();
    PipelineCounters counters;
    auto transport = nftest::mock_transport([](const std::string&) {
        return std::string(
            "<q1><question_title>Q?</question_title><background>b</background>"
            "<resolution_criteria>by 2025-01-01</resolution_criteria>"
            "<answer>one two three four</answer><answer_type>string (name)</answer_type></q1>");
    });
    auto creator = nftest::make_mock_client(gateway::ModelRole::creator, transport);
    auto r = generate_samples(plain_article(), creator, store, 3, counters);
    REQUIRE(r.ok());
    CHECK(r.value().empty());
    CHECK(counters.get("generation_answer_too_long") == 1);
}

TEST_CASE("validate_sample parses verdicts and counts unparseable ones") {
    auto store = templates();
    PipelineCounters counters;
    auto sample = sample_with("T?", "bg", "Someone Name", "string (name)");

    auto yes = nftest::make_mock_client(
        gateway::ModelRole::selector,
        nftest::mock_transport([](const std::string&) { return "...<answer>1</answer>"; }));
    CHECK(validate_sample(sample, plain_article(), yes, store, counters).value());

    auto no = nftest::make_mock_client(
        gateway::ModelRole::selector,
        nftest::mock_transport([](const std::string&) { return "...<answer>0</answer>"; }));
    CHECK_FALSE(validate_sample(sample, plain_article(), no, store, counters).value());

    auto mute = nftest::make_mock_client(
        gateway::ModelRole::selector,
        nftest::mock_transport([](const std::string&) { return "looks fine to me"; }));
    CHECK_FALSE(validate_sample(sample, plain_article(), mute, store, counters).value());
    CHECK(counters.get("verdict_unparsed") == 1);
}

TEST_CASE("select_best: singleton bypasses the selector entirely") {
    auto store = templates();
    PipelineCounters counters;
    auto transport = nftest::mock_transport([](const std::string&) {
        FAIL("selector must not be called for a singleton");
        return "";
    });
    auto selector = nftest::make_mock_client(gateway::ModelRole::selector, transport);

    auto s = sample_with("Only one?", "bg", "Solo Winner", "string (name)");
    auto r = select_best({s}, selector, store, counters);
    REQUIRE(r.ok());
    REQUIRE(r.value().has_value());
    CHECK(r.value()->question_title == "Only one?");
    CHECK(transport->requests_made() == 0);

    auto none = select_best({}, selector, store, counters);
    REQUIRE(none.ok());
    CHECK_FALSE(none.value().has_value());
}

TEST_CASE("select_best: echoes the chosen block and maps it back to the input") {
    auto store = templates();
    PipelineCounters counters;
    nftest::PipelineRules rules;
    rules.pick = [](int) { return 1; };  // second of three
    auto selector = nftest::make_mock_client(gateway::ModelRole::selector,
                                             nftest::mock_transport(nftest::mock_selector(rules)));

    std::vector<ForecastSample> candidates;
    for (int j = 0; j < 3; ++j) {
        auto s = sample_with(nftest::mock_title(4, j), "bg", nftest::mock_answer(4),
                             "string (name)");
        s.sample_id = "cand" + std::to_string(j);
        candidates.push_back(s);
    }
    auto r = select_best(candidates, selector, store, counters);
    REQUIRE(r.ok());
    REQUIRE(r.value().has_value());
    CHECK(r.value()->sample_id == "cand1");

    nftest::PipelineRules no_good;
    no_good.no_good = [](int) { return true; };
    auto refuser = nftest::make_mock_client(
        gateway::ModelRole::selector, nftest::mock_transport(nftest::mock_selector(no_good)));
    auto none = select_best(candidates, refuser, store, counters);
    REQUIRE(none.ok());
    CHECK_FALSE(none.value().has_value());
    CHECK(counters.get("no_good_question") == 1);
}

TEST_CASE("fix_leakage scrubs the answer from the background") {
    auto store = templates();
    PipelineCounters counters;
    nftest::PipelineRules rules;
    auto selector = nftest::make_mock_client(gateway::ModelRole::selector,
                                             nftest::mock_transport(nftest::mock_selector(rules)));

    auto s = sample_with(nftest::mock_title(2, 0),
                         "Insiders consider " + nftest::mock_answer(2) + " the frontrunner.",
                         nftest::mock_answer(2), "string (name)");
    CHECK_FALSE(string_leak_filter(s));
    auto fixed = fix_leakage(s, selector, store, counters);
    CHECK(fixed.background.find(nftest::mock_answer(2)) == std::string::npos);
    CHECK(fixed.question_title == s.question_title);
    CHECK(fixed.answer == s.answer);
    CHECK(string_leak_filter(fixed));

    // An already-clean sample round-trips unchanged.
    auto clean = sample_with(nftest::mock_title(3, 0), "No hints here.", nftest::mock_answer(3),
                             "string (name)");
    auto same = fix_leakage(clean, selector, store, counters);
    CHECK(same.background == clean.background);
    CHECK(same.question_title == clean.question_title);
}

TEST_CASE("fix_leakage rejects responses that mutate protected fields") {
    auto store = templates();
    PipelineCounters counters;
    auto mutator = nftest::make_mock_client(
        gateway::ModelRole::selector, nftest::mock_transport([](const std::string&) {
            return std::string(
                "<q1><question_id>0</question_id>"
                "<question_title>Completely different?</question_title>"
                "<background>scrubbed</background>"
                "<resolution_criteria>rc</resolution_criteria>"
                "<answer>Changed Answer</answer>"
                "<answer_type>string (name)</answer_type></q1>");
        }));
    auto s = sample_with("Original title?", "bg with Secret Winner", "Secret Winner",
                         "string (name)");
    auto kept = fix_leakage(s, mutator, store, counters);
    CHECK(kept.answer == "Secret Winner");
    CHECK(kept.question_title == "Original title?");
    CHECK(kept.background == s.background);
    CHECK(counters.get("leakfix_mutated_protected_fields") == 1);

    auto garbled = nftest::make_mock_client(
        gateway::ModelRole::selector,
        nftest::mock_transport([](const std::string&) { return "no parseable block"; }));
    auto kept2 = fix_leakage(s, garbled, store, counters);
    CHECK(kept2.background == s.background);
    CHECK(counters.get("leakfix_unparsed") == 1);
}

TEST_CASE("string leak filter: exact rule and token mode") {
    // Full-answer substring absent: kept by the exact rule.
    auto partial = sample_with("Who will be confirmed as prime minister?",
                               "Svyrydenko confirmed the schedule.", "Yulia Svyrydenko",
                               "string (name)");
    CHECK(string_leak_filter(partial));
    CHECK_FALSE(string_leak_filter(partial, /*token_mode=*/true));

    auto title_leak = sample_with("Which host city lies in Brazil?", "bg", "Brazil",
                                  "string (location)");
    CHECK_FALSE(string_leak_filter(title_leak));

    auto short_leak = sample_with("When will it happen?", "The July 2025 deadline looms.", "July",
                                  "string (date)");
    CHECK_FALSE(string_leak_filter(short_leak));

    // Case and spacing differences still match.
    auto cased = sample_with("Q?", "the YULIA   SVYRYDENKO pick", "Yulia Svyrydenko",
                             "string (name)");
    CHECK_FALSE(string_leak_filter(cased));
}

TEST_CASE("finalize_resolution_date applies the min rule with fallback") {
    PipelineCounters counters;
    corpus::Article a = plain_article();  // published 2025-07-10

    auto late = sample_with("Q?", "bg", "X Y", "string (name)");
    late.resolution.resolution_date = Date(2025, 7, 17);
    CHECK(finalize_resolution_date(late, a, counters).resolution_date().iso() == "2025-07-10");

    auto early = sample_with("Q?", "bg", "X Y", "string (name)");
    early.resolution.resolution_date = Date(2025, 7, 1);
    CHECK(finalize_resolution_date(early, a, counters).resolution_date().iso() == "2025-07-01");

    auto garbage = sample_with("Q?", "bg", "X Y", "string (name)");
    garbage.resolution.resolution_date = Date();  // unparseable proposal
    CHECK(finalize_resolution_date(garbage, a, counters).resolution_date().iso() == "2025-07-10");
    CHECK(counters.get("resolution_date_fallback") == 1);
}

TEST_CASE("finalize_resolution_date never exceeds the publish date (property)") {
    PipelineCounters counters;
    std::mt19937_64 rng(41);
    for (int t = 0; t < 500; ++t) {
        corpus::Article a = plain_article();
        a.publish_date = Date(2024, 1, 1).add_days(static_cast<int>(rng() % 600));
        auto s = sample_with("Q?", "bg", "X Y", "string (name)");
        s.resolution.resolution_date =
            rng() % 5 == 0 ? Date() : Date(2024, 1, 1).add_days(static_cast<int>(rng() % 700));
        auto out = finalize_resolution_date(s, a, counters);
        CHECK(out.resolution_date() <= a.publish_date);
        CHECK(out.resolution_date_final);
    }
}

TEST_CASE("answer type filter") {
    CHECK(answer_type_filter(sample_with("Q?", "b", "A B", "string (name)")));
    CHECK(answer_type_filter(sample_with("Q?", "b", "A B", "String (Location)")));
    CHECK_FALSE(answer_type_filter(sample_with("Q?", "b", "A B", "numeric (integer)")));
    CHECK_FALSE(answer_type_filter(sample_with("Q?", "b", "A B", "")));
}

TEST_CASE("resolution cutoff filter is strict") {
    Date threshold(2024, 1, 1);
    auto s = sample_with("Q?", "b", "A B", "string (name)");
    s.resolution.resolution_date = Date(2024, 1, 1);
    CHECK_FALSE(resolution_cutoff_filter(s, threshold));  // boundary drops
    s.resolution.resolution_date = Date(2024, 1, 2);
    CHECK(resolution_cutoff_filter(s, threshold));
    s.resolution.resolution_date = Date(2023, 12, 31);
    CHECK_FALSE(resolution_cutoff_filter(s, threshold));
}

TEST_CASE("run_pipeline on ten articles matches hand-computed stage counts") {
    // Rules: 2 questions per article; exactly one valid per article
    // ((i+j) % 2 == 0); no leaks; all string answers; all dates past the
    // threshold. Expected: 10 -> 20 -> 10 -> 10 -> 10 -> 10 -> 10.
    nftest::PipelineRules rules;
    rules.questions_per_article = 2;
    rules.valid = [](int i, int j) { return (i + j) % 2 == 0; };

    auto publish_of = [](int) { return Date(2025, 3, 15); };
    std::vector<corpus::Article> articles;
    for (int i = 0; i < 10; ++i) articles.push_back(nftest::mock_article(i, publish_of(i)));

    auto creator = nftest::make_mock_client(
        gateway::ModelRole::creator,
        nftest::mock_transport(nftest::mock_creator(rules, publish_of)));
    auto selector = nftest::make_mock_client(
        gateway::ModelRole::selector, nftest::mock_transport(nftest::mock_selector(rules)));

    PipelineConfig config;
    config.questions_per_article = 2;
    auto store = templates();
    auto result = run_pipeline(articles, creator, selector, config, store);

    REQUIRE(result.reports.size() == 6);
    CHECK(result.reports[0].stage_name == "Question Generation");
    CHECK(result.reports[0].input_count == 10);
    CHECK(result.reports[0].output_count == 20);
    CHECK(result.reports[1].output_count == 10);
    CHECK(result.reports[2].output_count == 10);
    CHECK(result.reports[3].output_count == 10);
    CHECK(result.reports[4].output_count == 10);
    CHECK(result.reports[5].output_count == 10);
    CHECK(result.samples.size() == 10);

    for (const auto& s : result.samples) {
        CHECK(string_leak_filter(s));
        CHECK(s.resolution_date_final);
        CHECK(s.resolution_date() <= Date(2025, 3, 15));
    }
    // Monotone attrition on every filtering stage.
    for (size_t i = 1; i < result.reports.size(); ++i) {
        CHECK(result.reports[i].output_count <= result.reports[i].input_count);
    }
}

TEST_CASE("run_pipeline over zero articles yields all-zero reports") {
    nftest::PipelineRules rules;
    auto creator = nftest::make_mock_client(
        gateway::ModelRole::creator,
        nftest::mock_transport(nftest::mock_creator(rules, [](int) { return Date(2025, 1, 1); })));
    auto selector = nftest::make_mock_client(
        gateway::ModelRole::selector, nftest::mock_transport(nftest::mock_selector(rules)));
    auto store = templates();
    auto result = run_pipeline({}, creator, selector, PipelineConfig{}, store);
    REQUIRE(result.reports.size() == 6);
    for (const auto& r : result.reports) {
        CHECK(r.input_count == 0);
        CHECK(r.output_count == 0);
    }
    CHECK(result.samples.empty());
}

TEST_CASE("run_pipeline is deterministic, also with workers > 1") {
    nftest::PipelineRules rules;
    rules.questions_per_article = 3;
    rules.valid = [](int i, int j) { return (i * 3 + j) % 4 != 1; };
    rules.pick = [](int i) { return i % 3; };
    rules.leaky = [](int i, int j) { return (i + j) % 5 == 0; };
    auto publish_of = [](int i) { return Date(2024, 6, 1).add_days(i * 7); };

    std::vector<corpus::Article> articles;
    for (int i = 0; i < 20; ++i) articles.push_back(nftest::mock_article(i, publish_of(i)));

    auto run_once = [&](int workers) {
        auto creator = nftest::make_mock_client(
            gateway::ModelRole::creator,
            nftest::mock_transport(nftest::mock_creator(rules, publish_of)));
        auto selector = nftest::make_mock_client(
            gateway::ModelRole::selector, nftest::mock_transport(nftest::mock_selector(rules)));
        PipelineConfig config;
        config.workers = workers;
        auto store = templates();
        auto result = run_pipeline(articles, creator, selector, config, store);
        std::string serialized = nf::qgen::to_json(result.reports).dump();
        for (const auto& s : result.samples) serialized += to_json(s).dump();
        return serialized;
    };
    auto a = run_once(1);
    CHECK(a == run_once(1));
    CHECK(a == run_once(4));
}

TEST_CASE("stage table renders counts with thousands separators") {
    std::vector<StageReport> reports = {
        {"Question Generation", 248321, 744963}, {"Validation", 744963, 295274},
        {"Best Question Selection", 295274, 157260}, {"Fixing Leakage", 157260, 150500},
        {"Answer Type Filtering", 150500, 62279}, {"Resolving after 2024-01-01", 62279, 52183},
    };
    std::string table = render_stage_table(reports);
    for (const char* expected : {"744,963", "295,274", "157,260", "150,500", "62,279", "52,183"}) {
        CHECK(table.find(expected) != std::string::npos);
    }
    CHECK(format_thousands(0) == "0");
    CHECK(format_thousands(999) == "999");
    CHECK(format_thousands(1000) == "1,000");
    CHECK(format_thousands(744963) == "744,963");
}

TEST_CASE("prompt template files have not drifted") {
    // The templates are a versioned contract; any edit must be deliberate and
    // re-frozen here together with the golden prompt files.
    const std::pair<const char*, const char*> frozen[] = {
        {"stage1_generate",
         "8218e318235f98ef8dbabb34f1f54beaff5fa2250b3176ef9a1d11c9d0f209a4"},
        {"stage2_validate",
         "35298d6bb6e7e72fdc397fca9d22f6488e25175c7e8bb2af3544cf147069a241"},
        {"stage3_select_best",
         "3577d7338d009988f88dbb4b26e3d25f92b0a6ae7435fd9e12ffe2a44a03354a"},
        {"stage4_fix_leakage",
         "671eed04e3bca159502ed0487b9392e70d636804ddf62441a8d19134adbcd1d9"},
        {"eval_with_retrieval",
         "5f6f2ffcc545b33b879e4a3aa2c00a8455d39855fa6165467de899c50d30df3a"},
        {"eval_without_retrieval",
         "eca8e02a86fa52d8101841d2612c93e5acc3eb85343b4b3482c9fe568d5eae06"},
    };
    auto store = templates();
    for (const auto& [name, digest] : frozen) {
        CAPTURE(name);
        CHECK(nf::sha256_hex(store.raw(name)) == digest);
    }
}

TEST_CASE("earliest-resolution-date hook records dates without touching resolution") {
    PipelineCounters counters;
    std::vector<ForecastSample> samples;
    for (int i = 0; i < 4; ++i) {
        auto s = sample_with("Q" + std::to_string(i) + "?", "bg", "A B", "string (name)");
        s.resolution.resolution_date = Date(2025, 6, 10 + i);
        samples.push_back(s);
    }
    auto resolver = [](const ForecastSample& s) -> std::optional<Date> {
        if (s.question_title == "Q2?") return std::nullopt;  // search found nothing
        return s.resolution.resolution_date.add_days(-3);
    };
    auto out = apply_earliest_resolution_dates(samples, resolver, counters);
    REQUIRE(out.size() == 4);
    CHECK(out[0].earliest_resolution_date->iso() == "2025-06-07");
    CHECK_FALSE(out[2].earliest_resolution_date.has_value());
    CHECK(out[0].resolution_date().iso() == "2025-06-10");  // untouched
    CHECK(counters.get("earliest_date_resolved") == 3);
    CHECK(counters.get("earliest_date_unresolved") == 1);
}

TEST_CASE("sample JSONL round-trip preserves all fields") {
    auto s = sample_with("Round trip?", "background text", "Some Person", "string (name)",
                         "<ul><li><b>Source of Truth</b>: records</li></ul>");
    s.kind = QuestionKind::freeform;
    s.source_article_id = "art9";
    s.source_url = "https://x.com/9";
    s.earliest_resolution_date = Date(2025, 5, 2);
    s.resolution_date_final = true;

    auto j = to_json(s);
    auto back = sample_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.earliest_resolution_date->iso() == "2025-05-02");

    auto b = make_binary_sample("Will X happen by June 2025?", "bg", "official record",
                                Date(2025, 6, 30), true, "https://m.example/q/1");
    CHECK(b.kind == QuestionKind::binary);
    CHECK(b.answer == "Yes");
    auto jb = to_json(b);
    CHECK(sample_from_json(jb).kind == QuestionKind::binary);
}
