#include "nf/common/jsonl.h"

#include <fstream>

namespace nf::jsonl {

Result<ReadStats> for_each(const std::filesystem::path& path,
                           const std::function<void(size_t, const json&)>& on_record) {
    std::ifstream in(path);
    if (!in.is_open()) {
        return Result<ReadStats>::failure("cannot open " + path.string());
    }
    ReadStats stats;
    std::string line;
    while (std::getline(in, line)) {
        ++stats.lines;
        if (line.empty()) {
            ++stats.empty;
            continue;
        }
        json record = json::parse(line, nullptr, false);
        if (record.is_discarded()) {
            ++stats.parse_errors;
            continue;
        }
        ++stats.parsed;
        on_record(stats.lines, record);
    }
    return stats;
}

struct Writer::Impl {
    std::ofstream out;
};

Writer::Writer(const std::filesystem::path& path) : impl_(new Impl) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    impl_->out.open(path, std::ios::trunc);
}

Writer::~Writer() { delete impl_; }

bool Writer::ok() const { return impl_->out.is_open() && impl_->out.good(); }

void Writer::write(const json& record) {
    write_raw(record.dump());
}

void Writer::write_raw(const std::string& line) {
    impl_->out << line << '\n';
    impl_->out.flush();
    ++written_;
}

}  // namespace nf::jsonl
