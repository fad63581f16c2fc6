#include "nf/qgen/templates.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nf::qgen {

TemplateStore::TemplateStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

const std::string& TemplateStore::raw(const std::string& name) const {
    auto it = cache_.find(name);
    if (it != cache_.end()) return it->second;

    std::filesystem::path path = dir_ / (name + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open()) {
        throw std::runtime_error("missing prompt template: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return cache_.emplace(name, buf.str()).first->second;
}

std::string TemplateStore::render(const std::string& name,
                                  const std::map<std::string, std::string>& subs) const {
    return substitute(raw(name), subs);
}

std::string TemplateStore::substitute(const std::string& tmpl,
                                      const std::map<std::string, std::string>& subs) {
    std::string out;
    out.reserve(tmpl.size());
    size_t i = 0;
    while (i < tmpl.size()) {
        char c = tmpl[i];
        if (c == '{' && i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
            out.push_back('{');
            i += 2;
            continue;
        }
        if (c == '}' && i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
            out.push_back('}');
            i += 2;
            continue;
        }
        if (c == '{') {
            size_t close = tmpl.find('}', i + 1);
            if (close != std::string::npos) {
                std::string key = tmpl.substr(i + 1, close - i - 1);
                auto it = subs.find(key);
                if (it != subs.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
            // Unknown span: keep verbatim.
            out.push_back(c);
            ++i;
            continue;
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

}  // namespace nf::qgen
