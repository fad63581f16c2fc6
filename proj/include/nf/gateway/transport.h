#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "nf/common/result.h"

namespace nf::gateway {

struct HttpResponse {
    int status = 0;
    std::string body;
};

using Header = std::pair<std::string, std::string>;

// Single seam between clients and the network. Everything above this layer is
// testable with in-process fakes; the hermeticity guarantee is "no transport
// calls", observable through requests_made().
class Transport {
public:
    virtual ~Transport() = default;
    virtual Result<HttpResponse> post(const std::string& base_url, const std::string& path,
                                      const std::string& body,
                                      const std::vector<Header>& headers) = 0;
    size_t requests_made() const { return requests_.load(); }

protected:
    void count_request() { ++requests_; }

private:
    std::atomic<size_t> requests_{0};
};

// Real HTTP over cpp-httplib, with an optional per-transport minimum interval
// between requests (crude rate limit shared by all users of the object).
class HttpTransport final : public Transport {
public:
    explicit HttpTransport(int timeout_seconds = 120, int min_interval_ms = 0);
    Result<HttpResponse> post(const std::string& base_url, const std::string& path,
                              const std::string& body, const std::vector<Header>& headers) override;

private:
    int timeout_seconds_;
    int min_interval_ms_;
    std::mutex pace_mu_;
    std::chrono::steady_clock::time_point last_request_{};
};

// Scripted transport for tests: the handler sees (path, body) and returns a
// response or error.
class FakeTransport final : public Transport {
public:
    using Handler = std::function<Result<HttpResponse>(const std::string& path, const std::string& body)>;
    explicit FakeTransport(Handler handler) : handler_(std::move(handler)) {}

    Result<HttpResponse> post(const std::string&, const std::string& path, const std::string& body,
                              const std::vector<Header>&) override {
        count_request();
        return handler_(path, body);
    }

private:
    Handler handler_;
};

// Fails every request; replay-only runs wrap one of these so any attempted
// network operation both fails and shows up in the request count.
class DeniedTransport final : public Transport {
public:
    Result<HttpResponse> post(const std::string&, const std::string&, const std::string&,
                              const std::vector<Header>&) override {
        count_request();
        return Result<HttpResponse>::failure("network disabled (replay-only)");
    }
};

}  // namespace nf::gateway
