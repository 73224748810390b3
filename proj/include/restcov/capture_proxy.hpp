#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>

namespace restcov {

struct ProxyConfig {
    std::string listen_host = "127.0.0.1";
    int listen_port = 0;  // 0 picks a free port
    std::string upstream_base;  // absolute URL, no query or fragment
    std::string log_path;
    std::size_t max_body_bytes = 1 << 20;

    static ProxyConfig parse_listen(std::string_view listen, std::string upstream,
                                    std::string log_path);
};

struct ProxySummary {
    std::int64_t requests_forwarded = 0;
    std::int64_t bytes_logged = 0;
    std::int64_t upstream_failures = 0;  // 502s, never logged as interactions
};

/// Recording reverse proxy. Forwards every request to the configured upstream,
/// relays the response and appends the exchange to a native JSONL log.
/// Appends are serialized through one writer; records never interleave.
class CaptureProxy {
public:
    /// Validates the config, opens the log for append and binds the listen
    /// socket. Throws BindError / LogWriteError / Error on bad config.
    explicit CaptureProxy(ProxyConfig config);
    ~CaptureProxy();

    CaptureProxy(const CaptureProxy&) = delete;
    CaptureProxy& operator=(const CaptureProxy&) = delete;

    /// Port actually bound (useful with listen_port = 0).
    int port() const;

    /// Serves until stop() is called; returns after in-flight exchanges drain.
    /// Throws LogWriteError if a record could not be appended.
    ProxySummary serve();

    /// Signals shutdown; safe to call from any thread or a signal context.
    void stop();

    ProxySummary summary() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Runs a proxy until `shutdown` becomes true. Convenience wrapper over
/// CaptureProxy for callers that poll a flag instead of holding the object.
ProxySummary run_proxy(const ProxyConfig& config, const std::atomic<bool>& shutdown);

}  // namespace restcov
