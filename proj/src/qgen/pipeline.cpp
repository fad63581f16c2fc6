#include "nf/qgen/pipeline.h"

#include <algorithm>
#include <cctype>
#include <future>

#include "nf/common/text.h"
#include "nf/gateway/parsers.h"

namespace nf::qgen {

namespace {

// Case-insensitive find of a label inside markup.
size_t find_icase(const std::string& haystack, const std::string& needle, size_t from = 0) {
    if (needle.empty() || haystack.size() < needle.size()) return std::string::npos;
    for (size_t i = from; i + needle.size() <= haystack.size(); ++i) {
        size_t j = 0;
        while (j < needle.size() &&
               std::tolower(static_cast<unsigned char>(haystack[i + j])) ==
                   std::tolower(static_cast<unsigned char>(needle[j]))) {
            ++j;
        }
        if (j == needle.size()) return i;
    }
    return std::string::npos;
}

std::string strip_markup(std::string s) {
    std::string out;
    bool in_tag = false;
    for (char c : s) {
        if (c == '<') {
            in_tag = true;
            continue;
        }
        if (c == '>') {
            in_tag = false;
            continue;
        }
        if (!in_tag) out.push_back(c);
    }
    return text::collapse_whitespace(out);
}

// Text following a label like "Source of Truth", up to the end of its list
// item or line.
std::string labeled_segment(const std::string& raw, const std::string& label) {
    size_t pos = find_icase(raw, label);
    if (pos == std::string::npos) return {};
    size_t start = pos + label.size();
    // Skip the tail of the label markup ("</b>:", ":", etc.).
    while (start < raw.size() && raw[start] != ':' && raw[start] != '\n') ++start;
    if (start < raw.size() && raw[start] == ':') ++start;
    size_t end = raw.size();
    size_t li = find_icase(raw, "</li>", start);
    if (li != std::string::npos) end = li;
    size_t nl = raw.find('\n', start);
    if (nl != std::string::npos && nl < end) end = nl;
    return strip_markup(raw.substr(start, end - start));
}

std::string render_article_for_prompt(const corpus::Article& article) {
    std::string out;
    out += "Title: " + article.title + "\n";
    out += "Source: " + article.source + "\n";
    out += "Publish Date: " + article.publish_date.human() + "\n\n";
    out += article.body;
    return out;
}

ForecastSample sample_from_block(const gateway::RawSampleBlock& block,
                                 const corpus::Article& article) {
    ForecastSample s;
    s.question_title = block.question_title;
    s.background = block.background;
    s.resolution = parse_criteria(block.resolution_criteria);
    s.answer = block.answer;
    s.answer_type = block.answer_type;
    s.source_article_id = article.id;
    s.source_url = article.url;
    s.kind = QuestionKind::freeform;
    s.sample_id = sample_id_for(article.id, block.question_title);
    return s;
}

}  // namespace

ResolutionCriteria parse_criteria(const std::string& raw) {
    ResolutionCriteria rc;
    rc.raw_text = raw;
    rc.source_of_truth = labeled_segment(raw, "source of truth");
    rc.answer_format = labeled_segment(raw, "accepted answer format");

    std::string date_segment = labeled_segment(raw, "resolution date");
    if (auto d = Date::parse_flexible(date_segment)) {
        rc.resolution_date = *d;
    } else if (auto whole = Date::parse_flexible(raw)) {
        rc.resolution_date = *whole;
    }
    if (rc.source_of_truth.empty()) rc.source_of_truth = strip_markup(raw);
    return rc;
}

Result<std::vector<ForecastSample>> generate_samples(const corpus::Article& article,
                                                     const gateway::Client& creator,
                                                     const TemplateStore& templates,
                                                     int questions_per_article,
                                                     PipelineCounters& counters) {
    using Out = std::vector<ForecastSample>;
    if (article.body.empty()) {
        return Result<Out>::failure("article body is empty");
    }
    std::map<std::string, std::string> subs = {
        {"self.num_questions_per_article", std::to_string(questions_per_article)},
        {"self.num_questions_per_article - 1", std::to_string(questions_per_article - 1)},
        {"source_article", render_article_for_prompt(article)},
    };
    auto response = creator.complete(templates.render(kStageGenerate, subs));
    if (!response.ok()) {
        return Result<Out>::failure("creator failed: " + response.error());
    }

    auto parsed = gateway::parse_sample_blocks(response.value());
    counters.bump("generation_malformed_blocks", parsed.skipped.size());

    Out samples;
    for (const auto& block : parsed.blocks) {
        if (text::split_words(block.answer).size() > 3) {
            counters.bump("generation_answer_too_long");
            continue;
        }
        samples.push_back(sample_from_block(block, article));
        if (samples.size() >= static_cast<size_t>(questions_per_article)) break;
    }
    return samples;
}

Result<bool> validate_sample(const ForecastSample& sample, const corpus::Article& article,
                             const gateway::Client& selector, const TemplateStore& templates,
                             PipelineCounters& counters) {
    std::map<std::string, std::string> subs = {
        {"source_article", render_article_for_prompt(article)},
        {"questions_text", render_question_block(sample, 1)},
    };
    auto response = selector.complete(templates.render(kStageValidate, subs));
    if (!response.ok()) {
        return Result<bool>::failure("selector failed: " + response.error());
    }
    auto verdict = gateway::parse_verdict(response.value());
    if (!verdict.ok()) {
        counters.bump("verdict_unparsed");
        return false;
    }
    return verdict.value();
}

Result<std::optional<ForecastSample>> select_best(const std::vector<ForecastSample>& samples,
                                                  const gateway::Client& selector,
                                                  const TemplateStore& templates,
                                                  PipelineCounters& counters) {
    using Out = std::optional<ForecastSample>;
    if (samples.empty()) return Out{};
    if (samples.size() == 1) return Out{samples[0]};  // kept as is, zero client calls

    std::map<std::string, std::string> subs = {
        {"questions_text", render_question_blocks(samples)},
    };
    auto response = selector.complete(templates.render(kStageSelectBest, subs));
    if (!response.ok()) {
        return Result<Out>::failure("selector failed: " + response.error());
    }
    if (response.value().find("NO GOOD QUESTION") != std::string::npos) {
        counters.bump("no_good_question");
        return Out{};
    }
    auto parsed = gateway::parse_sample_blocks(response.value());
    if (parsed.blocks.empty()) {
        counters.bump("selection_unparsed");
        return Out{};
    }
    const auto& chosen = parsed.blocks.front();
    std::string chosen_title = text::canonical(chosen.question_title);
    for (const auto& s : samples) {
        if (text::canonical(s.question_title) == chosen_title) return Out{s};
    }
    // The selector echoed an edited title; keep its output but preserve the
    // article linkage.
    counters.bump("selection_title_mismatch");
    ForecastSample s = samples.front();
    s.question_title = chosen.question_title;
    s.background = chosen.background;
    s.resolution = parse_criteria(chosen.resolution_criteria);
    s.answer = chosen.answer;
    s.answer_type = chosen.answer_type;
    s.sample_id = sample_id_for(s.source_article_id, s.question_title);
    return Out{s};
}

ForecastSample fix_leakage(const ForecastSample& sample, const gateway::Client& selector,
                           const TemplateStore& templates, PipelineCounters& counters) {
    std::map<std::string, std::string> subs = {
        {"questions_text", render_question_block(sample, 1)},
    };
    auto response = selector.complete(templates.render(kStageFixLeakage, subs));
    if (!response.ok()) {
        counters.bump("leakfix_transport_error");
        return sample;
    }
    auto parsed = gateway::parse_sample_blocks(response.value());
    if (parsed.blocks.empty()) {
        counters.bump("leakfix_unparsed");
        return sample;
    }
    // The response carries analysis followed by the corrected block; the last
    // block is authoritative.
    const auto& fixed = parsed.blocks.back();
    if (text::collapse_whitespace(fixed.question_title) !=
            text::collapse_whitespace(sample.question_title) ||
        text::collapse_whitespace(fixed.answer) != text::collapse_whitespace(sample.answer) ||
        text::collapse_whitespace(fixed.answer_type) !=
            text::collapse_whitespace(sample.answer_type)) {
        counters.bump("leakfix_mutated_protected_fields");
        return sample;
    }
    ForecastSample out = sample;
    out.background = fixed.background;
    ResolutionCriteria rc = parse_criteria(fixed.resolution_criteria);
    rc.resolution_date = sample.resolution.resolution_date;  // never rewritten
    out.resolution = rc;
    return out;
}

bool string_leak_filter(const ForecastSample& sample, bool token_mode) {
    std::string needle = text::canonical(sample.answer);
    if (needle.empty()) return true;
    std::string haystack = text::canonical(sample.question_title + " " + sample.background + " " +
                                           criteria_text(sample));
    if (haystack.find(needle) != std::string::npos) return false;
    if (token_mode) {
        for (const auto& token : text::split_words(needle)) {
            if (token.size() >= 4 && haystack.find(token) != std::string::npos) return false;
        }
    }
    return true;
}

ForecastSample finalize_resolution_date(const ForecastSample& sample,
                                        const corpus::Article& article,
                                        PipelineCounters& counters) {
    ForecastSample out = sample;
    if (!sample.resolution.resolution_date.ok()) {
        counters.bump("resolution_date_fallback");
        out.resolution.resolution_date = article.publish_date;
    } else {
        out.resolution.resolution_date =
            std::min(sample.resolution.resolution_date, article.publish_date);
    }
    out.resolution_date_final = true;
    return out;
}

std::vector<ForecastSample> apply_earliest_resolution_dates(std::vector<ForecastSample> samples,
                                                            const EarliestDateResolver& resolver,
                                                            PipelineCounters& counters) {
    for (auto& s : samples) {
        auto earliest = resolver(s);
        if (earliest && earliest->ok()) {
            s.earliest_resolution_date = *earliest;
            counters.bump("earliest_date_resolved");
        } else {
            counters.bump("earliest_date_unresolved");
        }
    }
    return samples;
}

bool answer_type_filter(const ForecastSample& sample) {
    return text::starts_with_icase(sample.answer_type, "string");
}

bool resolution_cutoff_filter(const ForecastSample& sample, const Date& threshold) {
    return sample.resolution_date().ok() && threshold < sample.resolution_date();
}

void PipelineCounters::merge(const PipelineCounters& other) {
    for (const auto& [k, v] : other.counts) counts[k] += v;
}

size_t PipelineCounters::get(const std::string& key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0 : it->second;
}

namespace {

// Everything the per-article work produces; merged in input order so worker
// count never changes output.
struct ArticleOutcome {
    size_t generated = 0;
    size_t valid = 0;
    std::optional<ForecastSample> selected;
    PipelineCounters counters;
};

ArticleOutcome process_article(const corpus::Article& article, const gateway::Client& creator,
                               const gateway::Client& selector, const PipelineConfig& config,
                               const TemplateStore& templates) {
    ArticleOutcome out;
    auto generated = generate_samples(article, creator, templates, config.questions_per_article,
                                      out.counters);
    if (!generated.ok()) {
        out.counters.bump("articles_skipped_creator_error");
        return out;
    }
    out.generated = generated.value().size();

    std::vector<ForecastSample> valid;
    for (auto& s : generated.value()) {
        ForecastSample finalized = finalize_resolution_date(s, article, out.counters);
        auto verdict = validate_sample(finalized, article, selector, templates, out.counters);
        if (!verdict.ok()) {
            out.counters.bump("validation_errors");
            continue;
        }
        if (verdict.value()) valid.push_back(std::move(finalized));
    }
    out.valid = valid.size();

    auto best = select_best(valid, selector, templates, out.counters);
    if (!best.ok()) {
        out.counters.bump("selection_errors");
        return out;
    }
    if (best.value()) out.selected = *best.value();
    return out;
}

}  // namespace

PipelineResult run_pipeline(const std::vector<corpus::Article>& articles,
                            const gateway::Client& creator, const gateway::Client& selector,
                            const PipelineConfig& config, const TemplateStore& templates) {
    PipelineResult result;

    std::vector<ArticleOutcome> outcomes(articles.size());
    const size_t workers = std::max(1, config.workers);
    for (size_t start = 0; start < articles.size(); start += workers) {
        size_t end = std::min(articles.size(), start + workers);
        std::vector<std::future<ArticleOutcome>> batch;
        for (size_t i = start; i < end; ++i) {
            batch.push_back(std::async(std::launch::async, [&, i] {
                return process_article(articles[i], creator, selector, config, templates);
            }));
        }
        for (size_t i = start; i < end; ++i) outcomes[i] = batch[i - start].get();
    }

    size_t generated = 0, valid = 0;
    std::vector<ForecastSample> selected;
    for (auto& o : outcomes) {
        generated += o.generated;
        valid += o.valid;
        if (o.selected) selected.push_back(std::move(*o.selected));
        result.counters.merge(o.counters);
    }

    // Leakage edit plus the exact-string re-scan; one Table-1 row.
    std::vector<ForecastSample> after_leak;
    for (const auto& s : selected) {
        ForecastSample edited = fix_leakage(s, selector, templates, result.counters);
        if (string_leak_filter(edited, config.token_leak_check)) {
            after_leak.push_back(std::move(edited));
        } else {
            result.counters.bump("string_leak_dropped");
        }
    }

    std::vector<ForecastSample> after_type;
    for (const auto& s : after_leak) {
        if (answer_type_filter(s)) {
            after_type.push_back(s);
        } else {
            result.counters.bump("answer_type_dropped");
        }
    }

    for (const auto& s : after_type) {
        if (resolution_cutoff_filter(s, config.resolution_threshold)) {
            result.samples.push_back(s);
        } else {
            result.counters.bump("resolution_cutoff_dropped");
        }
    }

    // Postcondition, not an assumption: survivors are leak-free.
    for (const auto& s : result.samples) {
        if (!string_leak_filter(s, config.token_leak_check)) {
            result.counters.bump("leak_recheck_violations");
        }
    }

    result.reports = {
        {"Question Generation", articles.size(), generated},
        {"Validation", generated, valid},
        {"Best Question Selection", valid, selected.size()},
        {"Fixing Leakage", selected.size(), after_leak.size()},
        {"Answer Type Filtering", after_leak.size(), after_type.size()},
        {"Resolving after " + config.resolution_threshold.iso(), after_type.size(),
         result.samples.size()},
    };
    return result;
}

nlohmann::json to_json(const std::vector<StageReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        arr.push_back({{"stage_name", r.stage_name},
                       {"input_count", r.input_count},
                       {"output_count", r.output_count}});
    }
    return arr;
}

std::vector<StageReport> stage_reports_from_json(const nlohmann::json& j) {
    std::vector<StageReport> reports;
    for (const auto& item : j) {
        StageReport r;
        r.stage_name = item.value("stage_name", "");
        r.input_count = item.value("input_count", size_t{0});
        r.output_count = item.value("output_count", size_t{0});
        reports.push_back(std::move(r));
    }
    return reports;
}

std::string format_thousands(size_t n) {
    std::string digits = std::to_string(n);
    std::string out;
    int since_sep = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (since_sep == 3) {
            out.push_back(',');
            since_sep = 0;
        }
        out.push_back(*it);
        ++since_sep;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string render_stage_table(const std::vector<StageReport>& reports) {
    size_t name_width = 5;  // "Stage"
    for (const auto& r : reports) name_width = std::max(name_width, r.stage_name.size());

    std::string out = "Stage";
    out.append(name_width - 5 + 2, ' ');
    out += "Questions\n";
    for (const auto& r : reports) {
        std::string num = format_thousands(r.output_count);
        out += r.stage_name;
        out.append(name_width - r.stage_name.size() + 2, ' ');
        // Right-align under the header column.
        if (num.size() < 9) out.append(9 - num.size(), ' ');
        out += num;
        out.push_back('\n');
    }
    return out;
}

}  // namespace nf::qgen
