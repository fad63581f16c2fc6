#include "nf/corpus/ingest.h"

#include <stdexcept>

#include "nf/common/digest.h"
#include "nf/common/jsonl.h"
#include "nf/common/text.h"

namespace nf::corpus {

namespace {

std::string content_hash(const Article& a) {
    return sha256_hex(text::canonical(a.title + " " + a.body));
}

std::string get_string(const nlohmann::json& j, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) return {};
    if (it->is_string()) return it->get<std::string>();
    return {};
}

std::string primary_subtag(const std::string& language) {
    std::string lower = text::to_lower_ascii(language);
    size_t dash = lower.find('-');
    return dash == std::string::npos ? lower : lower.substr(0, dash);
}

}  // namespace

FieldMapping FieldMapping::from_json(const nlohmann::json& j) {
    FieldMapping m;
    m.url = j.value("url", m.url);
    m.date = j.value("date", m.date);
    m.title = j.value("title", m.title);
    m.body = j.value("body", m.body);
    m.language = j.value("language", "");
    m.source = j.value("source", "");
    m.default_language = j.value("default_language", m.default_language);
    return m;
}

size_t IngestCounters::total_skipped() const {
    size_t n = 0;
    for (const auto& [_, c] : skipped) n += c;
    return n;
}

Result<IngestCounters> ingest(const std::filesystem::path& path, const FieldMapping& mapping,
                              const std::function<void(Article&&)>& sink) {
    IngestCounters counters;
    auto stats = jsonl::for_each(path, [&](size_t, const nlohmann::json& record) {
        if (!record.is_object()) {
            ++counters.skipped["not_object"];
            return;
        }
        Article a;
        a.url = get_string(record, mapping.url);
        if (a.url.empty()) {
            ++counters.skipped["missing_url"];
            return;
        }
        auto date = Date::parse_iso(get_string(record, mapping.date));
        if (!date) date = Date::parse_flexible(get_string(record, mapping.date));
        if (!date) {
            ++counters.skipped["bad_date"];
            return;
        }
        a.publish_date = *date;
        a.title = text::collapse_whitespace(text::nfc(get_string(record, mapping.title)));
        a.body = text::collapse_whitespace(text::nfc(get_string(record, mapping.body)));
        if (a.title.empty()) {
            ++counters.skipped["missing_title"];
            return;
        }
        if (a.body.empty()) {
            ++counters.skipped["missing_body"];
            return;
        }
        a.language = mapping.language.empty() ? mapping.default_language
                                              : get_string(record, mapping.language);
        if (a.language.empty()) a.language = mapping.default_language;
        a.source = mapping.source.empty() ? domain_of(a.url) : get_string(record, mapping.source);
        if (a.source.empty()) a.source = domain_of(a.url);
        a.id = article_id_from_url(a.url);
        ++counters.yielded;
        sink(std::move(a));
    });
    if (!stats.ok()) return Result<IngestCounters>::failure(stats.error());
    counters.lines = stats.value().lines;
    counters.skipped["unparseable_json"] += stats.value().parse_errors;
    if (counters.skipped["unparseable_json"] == 0) counters.skipped.erase("unparseable_json");
    return counters;
}

Result<std::vector<Article>> ingest_all(const std::filesystem::path& path,
                                        const FieldMapping& mapping, IngestCounters* counters) {
    std::vector<Article> out;
    auto r = ingest(path, mapping, [&](Article&& a) { out.push_back(std::move(a)); });
    if (!r.ok()) return Result<std::vector<Article>>::failure(r.error());
    if (counters) *counters = r.value();
    return out;
}

Result<std::vector<Article>> load_articles(const std::filesystem::path& path) {
    std::vector<Article> out;
    auto stats = jsonl::for_each(path, [&](size_t, const nlohmann::json& record) {
        Article a = article_from_json(record);
        if (!a.url.empty() && a.publish_date.ok() && !a.body.empty()) out.push_back(std::move(a));
    });
    if (!stats.ok()) return Result<std::vector<Article>>::failure(stats.error());
    return out;
}

bool Deduper::admit(const Article& a) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!urls_.insert(a.url).second) {
        ++url_dups_;
        return false;
    }
    if (!content_hashes_.insert(content_hash(a)).second) {
        ++content_dups_;
        return false;
    }
    return true;
}

std::vector<Article> dedup(const std::vector<Article>& articles) {
    Deduper d;
    std::vector<Article> out;
    out.reserve(articles.size());
    for (const auto& a : articles) {
        if (d.admit(a)) out.push_back(a);
    }
    return out;
}

bool in_window(const Article& a, const Date& start, const Date& end, const std::string& language) {
    if (a.publish_date < start || end < a.publish_date) return false;
    if (!language.empty() && primary_subtag(a.language) != primary_subtag(language)) return false;
    return true;
}

std::vector<Article> filter_window(const std::vector<Article>& articles, const Date& start,
                                   const Date& end, const std::string& language) {
    if (end < start) throw std::invalid_argument("filter_window: start > end");
    std::vector<Article> out;
    for (const auto& a : articles) {
        if (in_window(a, start, end, language)) out.push_back(a);
    }
    return out;
}

}  // namespace nf::corpus
