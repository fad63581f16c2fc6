#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "nf/common/date.h"

namespace nf::corpus {

struct Article {
    std::string id;      // deterministic from url, so re-ingestion is idempotent
    std::string source;  // outlet domain
    std::string url;
    Date publish_date;
    std::string title;
    std::string body;
    std::string language;  // BCP-47
};

std::string article_id_from_url(const std::string& url);

// Outlet domain extracted from the url host ("https://www.dw.com/en/x" -> "www.dw.com").
std::string domain_of(const std::string& url);

nlohmann::json to_json(const Article& a);
Article article_from_json(const nlohmann::json& j);

}  // namespace nf::corpus
