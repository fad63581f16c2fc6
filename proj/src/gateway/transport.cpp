#include "nf/gateway/transport.h"

#include <thread>

#include <httplib.h>

namespace nf::gateway {

HttpTransport::HttpTransport(int timeout_seconds, int min_interval_ms)
    : timeout_seconds_(timeout_seconds), min_interval_ms_(min_interval_ms) {}

Result<HttpResponse> HttpTransport::post(const std::string& base_url, const std::string& path,
                                         const std::string& body,
                                         const std::vector<Header>& headers) {
    if (min_interval_ms_ > 0) {
        std::lock_guard<std::mutex> lock(pace_mu_);
        auto now = std::chrono::steady_clock::now();
        auto next = last_request_ + std::chrono::milliseconds(min_interval_ms_);
        if (last_request_.time_since_epoch().count() != 0 && next > now) {
            std::this_thread::sleep_for(next - now);
        }
        last_request_ = std::chrono::steady_clock::now();
    }
    count_request();

    httplib::Client cli(base_url);
    cli.set_connection_timeout(timeout_seconds_, 0);
    cli.set_read_timeout(timeout_seconds_, 0);
    cli.set_write_timeout(timeout_seconds_, 0);

    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);

    auto res = cli.Post(path, h, body, "application/json");
    if (!res) {
        return Result<HttpResponse>::failure("transport error: " + httplib::to_string(res.error()));
    }
    return HttpResponse{res->status, res->body};
}

}  // namespace nf::gateway
