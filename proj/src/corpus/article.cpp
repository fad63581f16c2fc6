#include "nf/corpus/article.h"

#include "nf/common/digest.h"

namespace nf::corpus {

std::string article_id_from_url(const std::string& url) {
    return short_digest(url);
}

std::string domain_of(const std::string& url) {
    size_t start = url.find("://");
    start = (start == std::string::npos) ? 0 : start + 3;
    size_t end = url.find_first_of("/?#", start);
    std::string host = url.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (size_t at = host.find('@'); at != std::string::npos) host = host.substr(at + 1);
    if (size_t colon = host.find(':'); colon != std::string::npos) host = host.substr(0, colon);
    return host;
}

nlohmann::json to_json(const Article& a) {
    return {
        {"id", a.id},         {"source", a.source},
        {"url", a.url},       {"publish_date", a.publish_date.iso()},
        {"title", a.title},   {"body", a.body},
        {"language", a.language},
    };
}

Article article_from_json(const nlohmann::json& j) {
    Article a;
    a.id = j.value("id", "");
    a.source = j.value("source", "");
    a.url = j.value("url", "");
    if (auto d = Date::parse_iso(j.value("publish_date", ""))) a.publish_date = *d;
    a.title = j.value("title", "");
    a.body = j.value("body", "");
    a.language = j.value("language", "");
    if (a.id.empty() && !a.url.empty()) a.id = article_id_from_url(a.url);
    return a;
}

}  // namespace nf::corpus
