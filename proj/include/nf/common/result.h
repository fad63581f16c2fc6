#pragma once

#include <cassert>
#include <optional>
#include <string>
#include <utility>

namespace nf {

// Minimal expected-like carrier for operations that fail without throwing
// (parsers, transport, cache). Fatal misuse (bad arguments) throws instead.
template <typename T>
class Result {
public:
    Result(T value) : value_(std::move(value)) {}

    static Result failure(std::string message) {
        Result r;
        r.error_ = std::move(message);
        return r;
    }

    bool ok() const { return value_.has_value(); }
    explicit operator bool() const { return ok(); }

    const T& value() const& {
        assert(ok());
        return *value_;
    }
    T& value() & {
        assert(ok());
        return *value_;
    }
    T&& take() && {
        assert(ok());
        return std::move(*value_);
    }

    const std::string& error() const { return error_; }

private:
    Result() = default;
    std::optional<T> value_;
    std::string error_;
};

// Result for operations with no payload.
class Status {
public:
    static Status success() { return Status(); }
    static Status failure(std::string message) {
        Status s;
        s.ok_ = false;
        s.error_ = std::move(message);
        return s;
    }

    bool ok() const { return ok_; }
    explicit operator bool() const { return ok_; }
    const std::string& error() const { return error_; }

private:
    bool ok_ = true;
    std::string error_;
};

}  // namespace nf
