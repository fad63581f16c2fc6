#include "nf/qgen/sample.h"

#include "nf/common/digest.h"

namespace nf::qgen {

const char* kind_name(QuestionKind kind) {
    return kind == QuestionKind::binary ? "binary" : "freeform";
}

QuestionKind kind_from_name(const std::string& name) {
    return name == "binary" ? QuestionKind::binary : QuestionKind::freeform;
}

std::string sample_id_for(const std::string& article_id, const std::string& question_title) {
    return short_digest(article_id + "\x1f" + question_title);
}

std::string criteria_text(const ForecastSample& sample) {
    if (!sample.resolution.raw_text.empty()) return sample.resolution.raw_text;
    std::string out = "<ul>\n";
    out += "    <li> <b>Source of Truth</b>: " + sample.resolution.source_of_truth + " </li>\n";
    out += "    <li> <b>Resolution Date</b>: " +
           (sample.resolution.resolution_date.ok() ? sample.resolution.resolution_date.human()
                                                   : std::string("unspecified")) +
           " </li>\n";
    out += "    <li> <b>Accepted Answer Format</b>: " + sample.resolution.answer_format + " </li>\n";
    out += "</ul>";
    return out;
}

std::string render_question_block(const ForecastSample& sample, int block_number) {
    std::string out;
    const std::string n = std::to_string(block_number);
    out += "<q" + n + ">\n";
    out += "<question_id>" + std::to_string(block_number - 1) + "</question_id>\n";
    out += "<question_title>" + sample.question_title + "</question_title>\n";
    out += "<background>" + sample.background + "</background>\n";
    out += "<resolution_criteria>" + criteria_text(sample) + "</resolution_criteria>\n";
    out += "<answer>" + sample.answer + "</answer>\n";
    out += "<answer_type>" + sample.answer_type + "</answer_type>\n";
    out += "</q" + n + ">";
    return out;
}

std::string render_question_blocks(const std::vector<ForecastSample>& samples) {
    std::string out;
    for (size_t i = 0; i < samples.size(); ++i) {
        if (i > 0) out += "\n\n";
        out += render_question_block(samples[i], static_cast<int>(i) + 1);
    }
    return out;
}

nlohmann::json to_json(const ForecastSample& s) {
    nlohmann::json j = {
        {"sample_id", s.sample_id},
        {"question_title", s.question_title},
        {"background", s.background},
        {"resolution_criteria",
         {{"source_of_truth", s.resolution.source_of_truth},
          {"resolution_date",
           s.resolution.resolution_date.ok() ? s.resolution.resolution_date.iso() : ""},
          {"answer_format", s.resolution.answer_format},
          {"raw_text", s.resolution.raw_text}}},
        {"answer", s.answer},
        {"answer_type", s.answer_type},
        {"source_article_id", s.source_article_id},
        {"source_url", s.source_url},
        {"question_kind", kind_name(s.kind)},
        {"resolution_date_final", s.resolution_date_final},
    };
    if (s.earliest_resolution_date) {
        j["earliest_resolution_date"] = s.earliest_resolution_date->iso();
    }
    return j;
}

ForecastSample sample_from_json(const nlohmann::json& j) {
    ForecastSample s;
    s.sample_id = j.value("sample_id", "");
    s.question_title = j.value("question_title", "");
    s.background = j.value("background", "");
    if (j.contains("resolution_criteria") && j["resolution_criteria"].is_object()) {
        const auto& rc = j["resolution_criteria"];
        s.resolution.source_of_truth = rc.value("source_of_truth", "");
        if (auto d = Date::parse_iso(rc.value("resolution_date", ""))) {
            s.resolution.resolution_date = *d;
        }
        s.resolution.answer_format = rc.value("answer_format", "");
        s.resolution.raw_text = rc.value("raw_text", "");
    }
    s.answer = j.value("answer", "");
    s.answer_type = j.value("answer_type", "");
    s.source_article_id = j.value("source_article_id", "");
    s.source_url = j.value("source_url", "");
    s.kind = kind_from_name(j.value("question_kind", "freeform"));
    s.resolution_date_final = j.value("resolution_date_final", false);
    if (j.contains("earliest_resolution_date") && j["earliest_resolution_date"].is_string()) {
        if (auto d = Date::parse_iso(j["earliest_resolution_date"].get<std::string>())) {
            s.earliest_resolution_date = *d;
        }
    }
    if (s.sample_id.empty()) {
        s.sample_id = sample_id_for(s.source_article_id, s.question_title);
    }
    return s;
}

ForecastSample make_binary_sample(const std::string& question_title, const std::string& background,
                                  const std::string& source_of_truth, const Date& resolution_date,
                                  bool outcome_yes, const std::string& source_url) {
    ForecastSample s;
    s.question_title = question_title;
    s.background = background;
    s.resolution.source_of_truth = source_of_truth;
    s.resolution.resolution_date = resolution_date;
    s.resolution.answer_format = "Yes or No";
    s.answer = outcome_yes ? "Yes" : "No";
    s.answer_type = "binary (yes/no)";
    s.source_url = source_url;
    s.kind = QuestionKind::binary;
    s.resolution_date_final = true;
    s.sample_id = sample_id_for(source_url, question_title);
    return s;
}

}  // namespace nf::qgen
